#include "mot3d/kitti_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <string_view>
#include <tuple>

#include "mot3d/errors.hpp"

namespace mot3d {

namespace {

constexpr std::size_t kDetectionFields = 17;
constexpr std::size_t kLabelFields = 17;
constexpr std::size_t kResultFields = 18;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Field cursor over one row, producing located errors.
class Row {
 public:
  Row(std::vector<std::string_view> fields, const std::string& source,
      std::size_t line)
      : fields_(std::move(fields)), source_(source), line_(line) {}

  std::size_t size() const { return fields_.size(); }

  void expect_arity(std::size_t n) const {
    if (fields_.size() != n) {
      fail("expected " + std::to_string(n) + " fields, found " +
           std::to_string(fields_.size()));
    }
  }

  int next_int(const char* name) { return parse<int>(name); }

  double next_double(const char* name) {
    const double v = parse<double>(name);
    if (!std::isfinite(v)) fail(std::string("non-finite ") + name);
    return v;
  }

  std::string next_string() { return std::string(fields_[pos_++]); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, line_, what);
  }

 private:
  template <typename T>
  T parse(const char* name) {
    const std::string_view f = fields_[pos_++];
    T value{};
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      fail(std::string("non-numeric ") + name + " '" + std::string(f) + "'");
    }
    return value;
  }

  std::vector<std::string_view> fields_;
  std::size_t pos_ = 0;
  const std::string& source_;
  std::size_t line_;
};

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

// Reads h w l x y z rotation_y.
std::array<double, 7> read_box_fields(Row& row) {
  std::array<double, 7> v{};
  constexpr const char* kNames[] = {"h", "w", "l", "x", "y", "z", "rotation_y"};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = row.next_double(kNames[i]);
  return v;
}

Box3D make_box(const std::array<double, 7>& v, const Row& row) {
  try {
    return Box3D(v[3], v[4], v[5], v[2], v[1], v[0], v[6]);
  } catch (const std::invalid_argument& e) {
    row.fail(e.what());
  }
}

int read_frame(Row& row) {
  const int frame = row.next_int("frame");
  if (frame < 0) row.fail("negative frame index");
  return frame;
}

template <typename F>
void for_each_row(std::istream& in, const std::string& source, F&& handle) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    Row row(split_fields(line), source, line_no);
    handle(row);
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

bool category_matches(const std::string& category, const std::string& filter) {
  if (filter.empty()) return true;
  return std::equal(category.begin(), category.end(), filter.begin(),
                    filter.end(), [](char a, char b) {
                      return std::tolower(static_cast<unsigned char>(a)) ==
                             std::tolower(static_cast<unsigned char>(b));
                    });
}

FrameMap<Detection> parse_detections(std::istream& in, const std::string& source,
                                     const std::string& category) {
  FrameMap<Detection> out;
  for_each_row(in, source, [&](Row& row) {
    row.expect_arity(kDetectionFields);
    const int frame = read_frame(row);
    std::string type = row.next_string();
    row.next_double("truncated");
    row.next_int("occluded");
    row.next_double("alpha");
    for (const char* n : {"x1", "y1", "x2", "y2"}) row.next_double(n);
    const Box3D box = make_box(read_box_fields(row), row);
    const double score = row.next_double("score");
    if (!category_matches(type, category)) return;
    out[frame].push_back(Detection{frame, box, score, std::move(type)});
  });
  return out;
}

FrameMap<Detection> read_detections(const std::filesystem::path& path,
                                    const std::string& category) {
  std::ifstream in = open_input(path);
  return parse_detections(in, path.string(), category);
}

FrameMap<GtObject> parse_gt_labels(std::istream& in, const std::string& source,
                                   const std::string& category) {
  FrameMap<GtObject> out;
  for_each_row(in, source, [&](Row& row) {
    row.expect_arity(kLabelFields);
    GtObject g;
    g.frame = read_frame(row);
    g.track_id = row.next_int("track id");
    g.category = row.next_string();
    g.truncated = row.next_double("truncated");
    g.occluded = row.next_int("occluded");
    g.alpha = row.next_double("alpha");
    for (double& v : g.bbox2d) v = row.next_double("bbox");
    g.raw_3d = read_box_fields(row);

    const bool dont_care = category_matches(g.category, "DontCare");
    if (!dont_care) {
      if (!category_matches(g.category, category)) return;
      if (g.track_id < 0) row.fail("negative track id");
      g.box = make_box(g.raw_3d, row);
    }
    out[g.frame].push_back(std::move(g));
  });
  return out;
}

FrameMap<GtObject> read_gt_labels(const std::filesystem::path& path,
                                  const std::string& category) {
  std::ifstream in = open_input(path);
  return parse_gt_labels(in, path.string(), category);
}

FrameMap<TrackReport> parse_tracking_results(std::istream& in,
                                             const std::string& source,
                                             const std::string& category) {
  FrameMap<TrackReport> out;
  for_each_row(in, source, [&](Row& row) {
    row.expect_arity(kResultFields);
    const int frame = read_frame(row);
    const int id = row.next_int("track id");
    std::string type = row.next_string();
    row.next_double("truncated");
    row.next_int("occluded");
    row.next_double("alpha");
    for (const char* n : {"x1", "y1", "x2", "y2"}) row.next_double(n);
    const Box3D box = make_box(read_box_fields(row), row);
    const double score = row.next_double("score");
    if (id < 0) row.fail("negative track id");
    if (!category_matches(type, category)) return;
    out[frame].push_back(TrackReport{frame, id, box, score, std::move(type)});
  });
  return out;
}

FrameMap<TrackReport> read_tracking_results(const std::filesystem::path& path,
                                            const std::string& category) {
  std::ifstream in = open_input(path);
  return parse_tracking_results(in, path.string(), category);
}

std::string format_result_row(const TrackReport& r) {
  std::string out = std::to_string(r.frame) + ' ' + std::to_string(r.id) + ' ' +
                    r.category + ' ' + std::to_string(kUnsetTruncated) + ' ' +
                    std::to_string(kUnsetOccluded);
  const Box3D& b = r.box;
  for (double v : {kUnsetAlpha, kUnsetBbox, kUnsetBbox, kUnsetBbox, kUnsetBbox,
                   b.h(), b.w(), b.l(), b.x(), b.y(), b.z(), b.theta(),
                   r.score}) {
    out += ' ';
    append_double(out, v);
  }
  return out;
}

void write_tracking_results(const std::vector<TrackReport>& reports,
                            const std::filesystem::path& path) {
  const bool sorted = std::is_sorted(
      reports.begin(), reports.end(), [](const TrackReport& a, const TrackReport& b) {
        return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
      });
  if (!sorted) {
    throw std::invalid_argument("tracking results must be sorted by (frame, id)");
  }
  std::string text;
  for (const TrackReport& r : reports) {
    text += format_result_row(r);
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::map<std::string, std::filesystem::path> list_sequences(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir.string());
  }
  static const std::regex kName(R"(\d{4}\.txt)");
  std::map<std::string, std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, kName)) out.emplace(name.substr(0, 4), entry.path());
  }
  return out;
}

}  // namespace mot3d
