#include "mot3d/commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <sstream>

#include "mot3d/config.hpp"
#include "mot3d/kitti_io.hpp"
#include "mot3d/parallel.hpp"
#include "mot3d/synthetic.hpp"
#include "mot3d/tracker.hpp"

namespace mot3d {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

int RunManifest::total_frames() const {
  int n = 0;
  for (const SequenceRun& s : sequences) n += s.frames;
  return n;
}

double RunManifest::tracker_seconds() const {
  double t = 0.0;
  for (const SequenceRun& s : sequences) t += s.tracker_seconds;
  return t;
}

double RunManifest::tracker_fps() const {
  const double t = tracker_seconds();
  return t > 0.0 ? total_frames() / t : 0.0;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["detections_dir"] = detections_dir.string();
  j["output_dir"] = output_dir.string();
  j["category"] = category;
  j["config_path"] = config_path ? nlohmann::ordered_json(config_path->string())
                                 : nlohmann::ordered_json(nullptr);
  auto& seqs = j["sequences"] = nlohmann::ordered_json::array();
  for (const SequenceRun& s : sequences) {
    seqs.push_back({{"name", s.name},
                    {"frames", s.frames},
                    {"detections", s.detections},
                    {"reports", s.reports},
                    {"tracker_seconds", s.tracker_seconds}});
  }
  j["total_frames"] = total_frames();
  j["tracker_seconds"] = tracker_seconds();
  j["tracker_fps"] = tracker_fps();
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

RunManifest run_track(const TrackOptions& options) {
  const auto wall_start = Clock::now();
  const auto sequences = list_sequences(options.detections_dir);
  if (sequences.empty()) {
    throw std::runtime_error("no sequence files found in " +
                             options.detections_dir.string());
  }
  const TrackerConfig config =
      options.config_path ? load_tracker_config(*options.config_path)
                          : TrackerConfig{};

  RunManifest manifest;
  manifest.detections_dir = options.detections_dir;
  manifest.output_dir = options.output_dir;
  manifest.category = options.category;
  manifest.config_path = options.config_path;

  std::vector<std::pair<std::string, fs::path>> inputs(sequences.begin(),
                                                       sequences.end());
  manifest.sequences.resize(inputs.size());

  std::vector<fs::path> written;
  std::mutex written_mutex;
  auto cleanup = [&] {
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  };

  try {
    fs::create_directories(options.output_dir);
    parallel_for(inputs.size(), options.jobs, [&](std::size_t i) {
      const auto& [name, path] = inputs[i];
      const FrameMap<Detection> dets = read_detections(path, options.category);
      const int frames = dets.empty() ? 0 : dets.rbegin()->first + 1;

      const auto start = Clock::now();
      const std::vector<TrackReport> reports = run_sequence(config, dets, frames);
      const double elapsed = seconds_since(start);

      const fs::path out = options.output_dir / (name + ".txt");
      {
        std::lock_guard lock(written_mutex);
        written.push_back(out);
      }
      write_tracking_results(reports, out);

      SequenceRun& run = manifest.sequences[i];
      run.name = name;
      run.frames = frames;
      for (const auto& [_, d] : dets) run.detections += d.size();
      run.reports = reports.size();
      run.tracker_seconds = elapsed;
      spdlog::debug("sequence {}: {} frames, {} reports", name, frames,
                    reports.size());
    });
    manifest.wall_seconds = seconds_since(wall_start);
    const fs::path manifest_path = options.output_dir / "manifest.json";
    written.push_back(manifest_path);
    write_text(manifest_path, manifest.to_json());
  } catch (...) {
    cleanup();
    throw;
  }
  spdlog::info("tracked {} sequences, {} frames at {:.1f} FPS",
               manifest.sequences.size(), manifest.total_frames(),
               manifest.tracker_fps());
  return manifest;
}

IntegralMetrics run_eval(const EvalCommandOptions& options) {
  const auto gt_files = list_sequences(options.gt_dir);
  const auto result_files = list_sequences(options.results_dir);
  if (gt_files.empty()) {
    throw std::runtime_error("no sequence files found in " +
                             options.gt_dir.string());
  }
  std::vector<std::string> missing, extra;
  for (const auto& [name, _] : gt_files) {
    if (!result_files.contains(name)) missing.push_back(name);
  }
  for (const auto& [name, _] : result_files) {
    if (!gt_files.contains(name)) extra.push_back(name);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "sequence sets differ:";
    for (const std::string& m : missing) msg += " missing result " + m;
    for (const std::string& e : extra) msg += " unexpected result " + e;
    throw std::runtime_error(msg);
  }

  std::vector<std::pair<std::string, fs::path>> names(gt_files.begin(),
                                                      gt_files.end());
  std::vector<EvalSequence> dataset(names.size());
  parallel_for(names.size(), options.jobs, [&](std::size_t i) {
    const std::string& name = names[i].first;
    dataset[i].name = name;
    dataset[i].gt = read_gt_labels(names[i].second, options.category);
    dataset[i].preds =
        read_tracking_results(result_files.at(name), options.category);
  });

  EvalOptions eval;
  eval.min_iou = options.min_iou;
  eval.recall_points = options.recall_points;
  eval.jobs = options.jobs;
  IntegralMetrics metrics = sweep_thresholds(dataset, eval);
  if (options.csv_path) write_text(*options.csv_path, format_curve_csv(metrics));
  return metrics;
}

std::string format_metrics_table(const IntegralMetrics& m) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << std::setw(9) << "sAMOTA" << std::setw(9) << "AMOTA" << std::setw(9)
     << "AMOTP" << std::setw(9) << "MOTA" << std::setw(9) << "MOTP"
     << std::setw(7) << "IDS" << std::setw(7) << "FRAG" << '\n';
  os << std::setw(9) << 100.0 * m.samota << std::setw(9) << 100.0 * m.amota
     << std::setw(9) << 100.0 * m.amotp << std::setw(9)
     << 100.0 * m.best.metrics.mota << std::setw(9)
     << 100.0 * m.best.metrics.motp << std::setw(7) << m.best.counts.ids
     << std::setw(7) << m.best.counts.frag << '\n';
  return os.str();
}

std::string format_curve_csv(const IntegralMetrics& m) {
  std::string out =
      "recall_target,reached,threshold,recall,mota,mota_unfloored,smota,motp,"
      "tp,fp,fn,ids\n";
  for (const RecallPoint& p : m.curve) {
    out += shortest(p.target_recall) + ',' + (p.reached ? "1" : "0") + ',';
    if (p.reached) {
      out += shortest(p.threshold) + ',' + shortest(p.achieved_recall) + ',' +
             shortest(p.mota) + ',' + shortest(p.mota_unfloored) + ',' +
             shortest(p.smota) + ',' + shortest(p.motp) + ',' +
             std::to_string(p.counts.tp) + ',' + std::to_string(p.counts.fp) +
             ',' + std::to_string(p.counts.fn) + ',' +
             std::to_string(p.counts.ids) + '\n';
    } else {
      out += ",,0,,0,0,,,,\n";
    }
  }
  out += "summary,,,," + shortest(m.amota) + ",," + shortest(m.samota) + ',' +
         shortest(m.amotp) + ",,,,\n";
  return out;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.frames < 1 || options.repetitions < 1 || options.objects < 0) {
    throw std::invalid_argument(
        "bench needs frames >= 1, repetitions >= 1 and objects >= 0");
  }
  ScenarioOptions so;
  so.frames = options.frames;
  so.objects = options.objects;
  so.seed = options.seed;
  const Scenario scene = make_scenario(so);

  // Flatten so that the timed loop does no map lookups.
  std::vector<std::vector<Detection>> frames(static_cast<std::size_t>(options.frames));
  for (const auto& [f, d] : scene.detections) frames[static_cast<std::size_t>(f)] = d;

  BenchReport report;
  report.frames = options.frames;
  report.objects = options.objects;
  std::size_t sink = 0;
  for (int rep = 0; rep < options.repetitions; ++rep) {
    Tracker tracker{TrackerConfig{}};
    const auto start = Clock::now();
    for (int f = 0; f < options.frames; ++f) {
      sink += tracker.step(f, frames[static_cast<std::size_t>(f)]).size();
    }
    const double elapsed = std::max(seconds_since(start), 1e-9);
    report.fps.push_back(options.frames / elapsed);
  }
  spdlog::debug("bench emitted {} reports", sink);

  report.mean_fps = std::accumulate(report.fps.begin(), report.fps.end(), 0.0) /
                    static_cast<double>(report.fps.size());
  report.median_fps = median(report.fps);
  return report;
}

}  // namespace mot3d
