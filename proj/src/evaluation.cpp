#include "mot3d/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "mot3d/assignment.hpp"
#include "mot3d/parallel.hpp"

namespace mot3d {

ClearCounts& ClearCounts::operator+=(const ClearCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  ids += o.ids;
  frag += o.frag;
  iou_sum += o.iou_sum;
  num_gt += o.num_gt;
  return *this;
}

ClearMetrics metrics_from_counts(const ClearCounts& c) {
  if (c.num_gt <= 0) {
    throw std::domain_error("cannot compute MOTA without ground truth objects");
  }
  ClearMetrics m;
  m.mota = 1.0 - static_cast<double>(c.fp + c.fn + c.ids) /
                     static_cast<double>(c.num_gt);
  m.motp = c.tp > 0 ? c.iou_sum / static_cast<double>(c.tp) : 0.0;
  return m;
}

namespace {

// One frame with the gt-by-prediction IoU table computed once, so that the
// threshold sweep only has to select subsets of predictions.
struct FrameView {
  std::vector<std::size_t> gt_index;  // positions of matchable gt rows
  std::vector<int> gt_ids;
  std::vector<int> pred_ids;
  std::vector<double> pred_scores;
  std::vector<double> iou;  // gt-major

  double at(std::size_t g, std::size_t p) const {
    return iou[g * pred_ids.size() + p];
  }
};

FrameView make_view(std::span<const GtObject> gt,
                    std::span<const TrackReport> preds) {
  FrameView v;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].dont_care()) continue;
    v.gt_index.push_back(i);
    v.gt_ids.push_back(gt[i].track_id);
  }
  for (const TrackReport& p : preds) {
    v.pred_ids.push_back(p.id);
    v.pred_scores.push_back(p.score);
  }
  v.iou.resize(v.gt_index.size() * preds.size());
  for (std::size_t g = 0; g < v.gt_index.size(); ++g) {
    const Box3D& gb = *gt[v.gt_index[g]].box;
    for (std::size_t p = 0; p < preds.size(); ++p) {
      v.iou[g * preds.size() + p] = iou3d(gb, preds[p].box);
    }
  }
  return v;
}

// `active` lists the prediction indices taking part. Returned gt indices
// refer to positions in v.gt_ids.
FrameMatch match_view(const FrameView& v, std::span<const std::size_t> active,
                      const Correspondence& previous, double min_iou) {
  const std::size_t ng = v.gt_ids.size();
  std::vector<char> gt_used(ng, 0);
  std::vector<char> pred_used(v.pred_ids.size(), 0);
  FrameMatch out;

  for (std::size_t g = 0; g < ng; ++g) {
    auto it = previous.find(v.gt_ids[g]);
    if (it == previous.end()) continue;
    for (std::size_t p : active) {
      if (pred_used[p] || v.pred_ids[p] != it->second) continue;
      if (v.at(g, p) >= min_iou) {
        out.matches.push_back({g, p, v.at(g, p)});
        gt_used[g] = 1;
        pred_used[p] = 1;
      }
      break;
    }
  }

  std::vector<std::size_t> rows, cols;
  for (std::size_t g = 0; g < ng; ++g) {
    if (!gt_used[g]) rows.push_back(g);
  }
  for (std::size_t p : active) {
    if (!pred_used[p]) cols.push_back(p);
  }
  if (!rows.empty() && !cols.empty()) {
    // Any gated pair saves more than all IoU gains combined, so the solver
    // maximises the number of gated pairs first and total IoU second.
    const double sentinel = static_cast<double>(std::min(rows.size(), cols.size()) + 1);
    CostMatrix cost(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const double iou = v.at(rows[r], cols[c]);
        cost(r, c) = iou >= min_iou ? -iou : sentinel;
      }
    }
    for (const auto& [r, c] : solve_min_cost(cost).pairs) {
      const std::size_t g = rows[r];
      const std::size_t p = cols[c];
      if (v.at(g, p) < min_iou) continue;
      out.matches.push_back({g, p, v.at(g, p)});
      gt_used[g] = 1;
      pred_used[p] = 1;
    }
  }

  std::sort(out.matches.begin(), out.matches.end(),
            [](const MatchedPair& a, const MatchedPair& b) {
              return a.gt_index < b.gt_index;
            });
  for (std::size_t g = 0; g < ng; ++g) {
    if (!gt_used[g]) out.unmatched_gt.push_back(g);
  }
  for (std::size_t p : active) {
    if (!pred_used[p]) out.unmatched_pred.push_back(p);
  }
  for (const MatchedPair& m : out.matches) {
    out.correspondence[v.gt_ids[m.gt_index]] = v.pred_ids[m.pred_index];
  }
  return out;
}

using SequenceCache = std::vector<FrameView>;

SequenceCache make_cache(const FrameMap<GtObject>& gt,
                         const FrameMap<TrackReport>& preds) {
  std::vector<int> frames;
  for (const auto& [f, _] : gt) frames.push_back(f);
  for (const auto& [f, _] : preds) frames.push_back(f);
  std::sort(frames.begin(), frames.end());
  frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

  const std::vector<GtObject> no_gt;
  const std::vector<TrackReport> no_preds;
  SequenceCache cache;
  cache.reserve(frames.size());
  for (int f : frames) {
    auto g = gt.find(f);
    auto p = preds.find(f);
    cache.push_back(make_view(g == gt.end() ? no_gt : g->second,
                              p == preds.end() ? no_preds : p->second));
  }
  return cache;
}

struct GtHistory {
  std::optional<int> last_pred;
  bool matched_last_seen = false;
};

ClearCounts accumulate(const SequenceCache& cache, double min_iou,
                       std::optional<double> threshold) {
  ClearCounts c;
  std::map<int, GtHistory> history;
  Correspondence corr;
  std::vector<std::size_t> active;
  for (const FrameView& v : cache) {
    active.clear();
    for (std::size_t p = 0; p < v.pred_ids.size(); ++p) {
      if (!threshold || v.pred_scores[p] >= *threshold) active.push_back(p);
    }
    FrameMatch m = match_view(v, active, corr, min_iou);

    c.num_gt += static_cast<std::int64_t>(v.gt_ids.size());
    for (const MatchedPair& pair : m.matches) {
      ++c.tp;
      c.iou_sum += pair.iou;
      GtHistory& h = history[v.gt_ids[pair.gt_index]];
      const int pred_id = v.pred_ids[pair.pred_index];
      if (h.last_pred && *h.last_pred != pred_id) ++c.ids;
      if (h.last_pred && !h.matched_last_seen) ++c.frag;
      h.last_pred = pred_id;
      h.matched_last_seen = true;
    }
    for (std::size_t g : m.unmatched_gt) {
      ++c.fn;
      history[v.gt_ids[g]].matched_last_seen = false;
    }
    c.fp += static_cast<std::int64_t>(m.unmatched_pred.size());
    corr = std::move(m.correspondence);
  }
  return c;
}

}  // namespace

FrameMatch match_frame(std::span<const GtObject> gt,
                       std::span<const TrackReport> preds,
                       const Correspondence& previous, double min_iou) {
  const FrameView v = make_view(gt, preds);
  std::vector<std::size_t> active(preds.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  FrameMatch m = match_view(v, active, previous, min_iou);
  for (MatchedPair& pair : m.matches) pair.gt_index = v.gt_index[pair.gt_index];
  for (std::size_t& g : m.unmatched_gt) g = v.gt_index[g];
  return m;
}

ClearCounts accumulate_clear(const FrameMap<GtObject>& gt,
                             const FrameMap<TrackReport>& preds, double min_iou,
                             std::optional<double> score_threshold) {
  return accumulate(make_cache(gt, preds), min_iou, score_threshold);
}

IntegralMetrics sweep_thresholds(std::span<const EvalSequence> dataset,
                                 const EvalOptions& options) {
  if (options.recall_points < 1) {
    throw std::invalid_argument("recall_points must be >= 1");
  }
  std::vector<SequenceCache> caches(dataset.size());
  parallel_for(dataset.size(), options.jobs, [&](std::size_t i) {
    caches[i] = make_cache(dataset[i].gt, dataset[i].preds);
  });

  std::vector<double> thresholds;
  for (const EvalSequence& s : dataset) {
    for (const auto& [_, reports] : s.preds) {
      for (const TrackReport& r : reports) thresholds.push_back(r.score);
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  auto evaluate = [&](std::optional<double> thr) {
    ClearCounts total;
    for (const SequenceCache& c : caches) total += accumulate(c, options.min_iou, thr);
    return total;
  };

  IntegralMetrics out;
  out.thresholds_evaluated = thresholds.size();

  std::vector<ClearCounts> counts(thresholds.size());
  parallel_for(thresholds.size(), options.jobs,
               [&](std::size_t i) { counts[i] = evaluate(thresholds[i]); });

  if (thresholds.empty()) {
    out.best.counts = evaluate(std::nullopt);
    out.best.metrics = metrics_from_counts(out.best.counts);
  } else {
    std::size_t best = 0;
    double best_mota = 0.0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      const double mota = metrics_from_counts(counts[i]).mota;
      if (i == 0 || mota >= best_mota) {
        best = i;
        best_mota = mota;
      }
    }
    out.best.threshold = thresholds[best];
    out.best.counts = counts[best];
    out.best.metrics = metrics_from_counts(counts[best]);
  }

  const std::int64_t num_gt = out.best.counts.num_gt;
  const int L = options.recall_points;
  double sum_mota = 0.0, sum_smota = 0.0, sum_motp = 0.0;
  for (int k = 1; k <= L; ++k) {
    RecallPoint pt;
    pt.target_recall = static_cast<double>(k) / L;

    // Smallest achieved recall >= k / L, compared exactly in integers.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (counts[i].tp * L < static_cast<std::int64_t>(k) * num_gt) continue;
      if (!pick || counts[i].tp <= counts[*pick].tp) pick = i;
    }
    if (pick) {
      const ClearCounts& c = counts[*pick];
      const ClearMetrics m = metrics_from_counts(c);
      const double r = pt.target_recall;
      const double n = static_cast<double>(num_gt);
      pt.reached = true;
      pt.threshold = thresholds[*pick];
      pt.achieved_recall = static_cast<double>(c.tp) / n;
      pt.mota_unfloored = m.mota;
      pt.mota = std::max(0.0, m.mota);
      const double errors = static_cast<double>(c.fp + c.fn + c.ids);
      pt.smota = std::clamp(1.0 - (errors - (1.0 - r) * n) / (r * n), 0.0, 1.0);
      pt.motp = m.motp;
      pt.counts = c;
    }
    sum_mota += pt.mota;
    sum_smota += pt.smota;
    sum_motp += pt.motp;
    out.curve.push_back(pt);
  }
  out.amota = sum_mota / L;
  out.samota = sum_smota / L;
  out.amotp = sum_motp / L;
  return out;
}

}  // namespace mot3d
