#include "mot3d/synthetic.hpp"

#include <numbers>
#include <random>

namespace mot3d {

Scenario make_scenario(const ScenarioOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> length(3.5, 4.5), width(1.5, 1.9),
      height(1.4, 1.7), start_z(5.0, 40.0), speed(-0.8, 0.8), score(0.0, 10.0);
  std::normal_distribution<double> noise(0.0, options.position_noise);

  struct Car {
    double x, y, z, l, w, h, vz;
  };
  std::vector<Car> cars;
  for (int k = 0; k < options.objects; ++k) {
    cars.push_back({-10.0 + 4.0 * k, 1.6, start_z(rng), length(rng), width(rng),
                    height(rng), speed(rng)});
  }

  Scenario s;
  s.num_frames = options.frames;
  const double heading = -std::numbers::pi / 2.0;  // facing +z
  for (int f = 0; f < options.frames; ++f) {
    for (int k = 0; k < options.objects; ++k) {
      const Car& c = cars[k];
      const double z = c.z + c.vz * f;
      const Box3D truth(c.x, c.y, z, c.l, c.w, c.h, heading);
      GtObject g;
      g.frame = f;
      g.track_id = k;
      g.category = options.category;
      g.raw_3d = {c.h, c.w, c.l, c.x, c.y, z, heading};
      g.box = truth;
      s.ground_truth[f].push_back(g);

      const double n = options.position_noise;
      const Box3D observed(c.x + (n > 0 ? noise(rng) : 0.0), c.y,
                           z + (n > 0 ? noise(rng) : 0.0), c.l, c.w, c.h,
                           heading);
      s.detections[f].push_back(Detection{f, observed, score(rng), options.category});
    }
  }
  return s;
}

}  // namespace mot3d
