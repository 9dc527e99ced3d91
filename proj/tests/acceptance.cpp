// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>

#include "oracles.hpp"
#include "sfseg/metrics.hpp"
#include "sfseg/npy.hpp"
#include "sfseg/pipeline.hpp"
#include "sfseg/uncertainty.hpp"

using namespace sfseg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

Outcome entropy_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  for (std::size_t c = 2; c <= 8; ++c) {
    const ProbVolume uniform(GridShape({1, 1}), c, std::vector<float>(c, 1.0f / c));
    out.require(std::abs(voxel_entropy(uniform)[0] - std::log2(double(c))) < 1e-6,
                fmt("uniform C=%zu", c));
    for (std::size_t k = 0; k < c; ++k) {
      std::vector<float> hot(c, 0.0f);
      hot[k] = 1.0f;
      out.require(voxel_entropy(ProbVolume(GridShape({1, 1}), c, hot))[0] == 0.0,
                  fmt("one-hot C=%zu", c));
    }
  }
  Rng rng(1);
  for (std::size_t c : {2, 3, 4, 7}) {
    const auto p = oracle::random_prob(rng, {100, 100}, c, 1.0 + 8.0 * rng.uniform());
    const auto h = voxel_entropy(p);
    for (double v : h.values()) {
      out.require(v >= 0.0 && v <= std::log2(double(c)), "fuzzed voxel out of range");
    }
  }
  const double t = seconds_since(t0);
  out.require(t < 1.0, fmt("runtime %.2f s", t));
  if (out.pass) out.detail = "uniform, one-hot and 4x10^4 fuzzed voxels";
  return out;
}

Outcome entropy_mask_oracle() {
  Outcome out;
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_prob(rng, {8, 8, 8}, 4, 1.0 + 6.0 * rng.uniform());
    const auto y = argmax_labels(p);
    const auto h = voxel_entropy(p);
    for (std::size_t i = 0; i < y.voxel_count(); ++i) {
      std::vector<double> probs;
      for (std::size_t c = 0; c < 4; ++c) probs.push_back(p.at(c, i));
      out.require(std::abs(h[i] - oracle::entropy_bits(probs)) < 1e-6, "entropy oracle");
    }
    const double tau = 2.0 * rng.uniform();
    const auto masked = entropy_mask(y, h, tau);
    for (std::size_t i = 0; i < y.voxel_count(); ++i) {
      const std::uint8_t expect = h[i] <= tau ? y[i] : 0;
      out.require(masked[i] == expect, fmt("trial %d voxel %zu", trial, i));
    }
    std::vector<std::uint8_t> prev(y.voxel_count(), 0);
    for (int k = 0; k < 20; ++k) {
      const auto m = entropy_mask(y, h, 2.0 * k / 19.0);
      for (std::size_t i = 0; i < y.voxel_count(); ++i) {
        out.require(!prev[i] || m[i] == prev[i], "kept set shrank as tau1 grew");
        prev[i] = m[i];
      }
    }
  }
  if (out.pass) out.detail = "50 volumes exact, 20-point tau1 grid monotone";
  return out;
}

Outcome nig_variance_check() {
  Outcome out;
  Rng rng(3);
  const std::size_t n = 1000;
  std::vector<double> a(n), b(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform(1.01, 8.0);
    b[i] = rng.uniform(0.05, 8.0);
    w[i] = rng.uniform(0.05, 4.0);
  }
  GridShape s({1, n});
  const NigField field{ScalarField(s, a), ScalarField(s, b), ScalarField(s, w),
                       ScalarField(s, std::vector<double>(n, 0.0))};
  const auto v = nig_variance(field);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(v[i] - w[i] / (b[i] * (a[i] - 1.0))));
  }
  out.require(worst <= 1e-9, fmt("max error %.3g", worst));

  GridShape one({1, 1});
  const NigField bad{ScalarField(one, {1.0}), ScalarField(one, {1.0}), ScalarField(one, {1.0}),
                     ScalarField(one, {0.0})};
  out.require(error_of([&] { nig_variance(bad); }) == ErrorCode::AlphaNotGreaterThanOne,
              "alpha = 1 accepted");

  // Regional entropy sweep through nig_params with default constants.
  const PipelineConfig cfg;
  GridShape grid({1, 101});
  std::vector<double> e(101);
  for (int k = 0; k <= 100; ++k) e[k] = k / 100.0;
  std::vector<float> probs(2 * 101);
  for (int k = 0; k <= 100; ++k) {
    probs[k] = 0.4f;
    probs[101 + k] = 0.6f;
  }
  const ProbVolume p(grid, 2, probs);
  const LabelVolume y(grid, 2, std::vector<std::uint8_t>(101, 1));
  for (std::uint8_t entropy_label : {1, 0}) {
    const LabelVolume ye(grid, 2, std::vector<std::uint8_t>(101, entropy_label));
    const auto var = nig_variance(nig_params(y, ye, ScalarField(grid, e), cfg, p));
    for (int k = 1; k <= 100; ++k) {
      out.require(var[k] > var[k - 1], fmt("not increasing at E=%.2f d=%d", e[k], 1 - entropy_label));
    }
  }
  if (out.pass) out.detail = fmt("max error %.2g over 1000 triples, monotone at d=0,1", worst);
  return out;
}

Outcome nig_density() {
  Outcome out;
  const NigParams params{2.0, 1.0, 0.0, 1.0};
  const int n_mu = 2001, n_s2 = 10000;
  const double dmu = 20.0 / (n_mu - 1), ds2 = 50.0 / n_s2;
  double total = 0.0;
  for (int j = 1; j <= n_s2; ++j) {
    const double s2 = j * ds2;
    double inner = 0.0;
    for (int i = 0; i < n_mu; ++i) {
      const double wt = (i == 0 || i == n_mu - 1) ? 0.5 : 1.0;
      inner += wt * std::exp(nig_logpdf(-10.0 + i * dmu, s2, params));
    }
    total += (j == n_s2 ? 0.5 : 1.0) * inner * dmu;
  }
  total *= ds2;
  out.require(std::abs(total - 1.0) <= 0.05, fmt("integral %.4f", total));

  for (double gamma : {0.0, 0.4, -1.3}) {
    const NigParams q{2.0, 1.0, gamma, 1.0};
    for (double s2 : {0.1, 1.0, 5.0}) {
      const double peak = nig_logpdf(gamma, s2, q);
      for (int k = -200; k <= 200; ++k) {
        if (k == 0) continue;
        out.require(nig_logpdf(gamma + 0.01 * k, s2, q) < peak, "density not peaked at gamma");
      }
    }
  }
  if (out.pass) out.detail = fmt("integral %.4f, peak at gamma", total);
  return out;
}

Image make_image(std::size_t rows, std::size_t cols, auto&& f) {
  std::vector<float> v(rows * cols);
  for (std::size_t y = 0; y < rows; ++y)
    for (std::size_t x = 0; x < cols; ++x) v[y * cols + x] = static_cast<float>(f(y, x));
  return Image(GridShape({rows, cols}), std::move(v));
}

bool near_edge(const EdgeMap& e, long y, long x) {
  const long rows = long(e.shape()[0]), cols = long(e.shape()[1]);
  for (long yy = y - 1; yy <= y + 1; ++yy)
    for (long xx = x - 1; xx <= x + 1; ++xx)
      if (yy >= 0 && yy < rows && xx >= 0 && xx < cols && e.at(yy, xx)) return true;
  return false;
}

Outcome canny_geometry() {
  Outcome out;
  double slowest = 0.0;
  auto timed = [&](const Image& img) {
    const auto t0 = std::chrono::steady_clock::now();
    auto e = canny(img, CannyParams{});
    slowest = std::max(slowest, seconds_since(t0));
    return e;
  };

  // Boundary between columns 31 and 32: pixels 31 and 32 are on it.
  const auto step = timed(make_image(64, 64, [](auto, auto x) { return x >= 32 ? 1.0 : 0.0; }));
  std::size_t boundary = 0, found = 0;
  for (long y = 0; y < 64; ++y)
    for (long x : {31L, 32L}) {
      ++boundary;
      found += near_edge(step, y, x);
    }
  const double step_recall = double(found) / boundary;
  out.require(step_recall >= 0.95, fmt("step recall %.3f", step_recall));
  for (long y = 0; y < 64; ++y)
    for (long x = 0; x < 64; ++x)
      if (step.at(y, x)) out.require(x >= 30 && x <= 33, "step edge off the boundary");

  out.require(timed(make_image(64, 64, [](auto, auto) { return 0.7; })).count() == 0,
              "constant image has edges");

  const auto square = timed(make_image(64, 64, [](auto y, auto x) {
    return (y >= 16 && y < 48 && x >= 16 && x < 48) ? 1.0 : 0.0;
  }));
  std::size_t perimeter = 0, hit = 0;
  for (long y = 16; y < 48; ++y)
    for (long x = 16; x < 48; ++x) {
      if (y != 16 && y != 47 && x != 16 && x != 47) continue;
      ++perimeter;
      hit += near_edge(square, y, x);
    }
  const double square_recall = double(hit) / perimeter;
  out.require(square_recall >= 0.95, fmt("square recall %.3f", square_recall));
  out.require(slowest < 1.0, fmt("slowest image %.2f s", slowest));
  if (out.pass) {
    out.detail = fmt("step recall %.3f, square recall %.3f, %.4f s/image", step_recall,
                     square_recall, slowest);
  }
  return out;
}

Outcome consistency_oracle() {
  Outcome out;
  Rng rng(6);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto cand = oracle::random_edges(rng, 16, 16, 0.05 + 0.3 * rng.uniform());
    auto cond = oracle::random_edges(rng, 16, 16, 0.05 + 0.3 * rng.uniform());
    if (cond.count() == 0) continue;
    double prev = -1.0;
    for (int r : {0, 1, 2}) {
      const auto s = consistency_score(cand, cond, r);
      const auto [m, t] = oracle::consistency_counts(cand, cond, r);
      if (r <= 1) {
        out.require(s.matched == m && s.condition_edges == t &&
                        s.score == double(m) / double(t),
                    fmt("trial %d r=%d", trial, r));
        ++checked;
      }
      out.require(s.score >= prev, "score decreased with r");
      prev = s.score;
    }
    out.require(consistency_score(cond, cond, 0).score == 1.0, "score(e, e) != 1");
    std::vector<std::uint8_t> none(256, 0);
    out.require(consistency_score(EdgeMap(cond.shape(), none), cond, 1).score == 0.0,
                "disjoint score != 0");
  }
  // Disjoint non-empty maps at r = 0.
  std::vector<std::uint8_t> left(256, 0), right(256, 0);
  for (std::size_t y = 0; y < 16; ++y) {
    left[y * 16 + 2] = 1;
    right[y * 16 + 12] = 1;
  }
  const EdgeMap l(GridShape({16, 16}), left), r(GridShape({16, 16}), right);
  out.require(consistency_score(l, r, 0).score == 0.0, "disjoint lines");
  if (out.pass) out.detail = fmt("%d (pair, r) cases exact", checked);
  return out;
}

Outcome planted_selection() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  int hits = 0;
  for (int t = 0; t < 100; ++t) {
    PhantomSpec ps;
    ps.seed = t;
    const auto y = make_phantom(ps).labels;
    Rng rng(split_seed(99, t));
    const std::size_t planted = rng.below(6);
    std::vector<Image> candidates;
    for (std::size_t i = 0; i < 6; ++i) {
      RenderSpec spec;
      spec.seed = split_seed(7 * t + 1, i);
      spec.quality = i == planted ? 0.95 : rng.uniform(0.0, 0.5);
      candidates.push_back(render_candidate(y, spec));
    }
    hits += select_best(candidates, y, PipelineConfig{}).best_index == planted;
  }
  const double t = seconds_since(t0);
  out.require(hits >= 95, fmt("%d/100 planted picks", hits));
  out.require(t < 30.0, fmt("runtime %.1f s", t));
  if (out.pass) out.detail = fmt("%d/100 planted picks, %.1f s", hits, t);
  return out;
}

Outcome fusion_exactness() {
  Outcome out;
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y_star = oracle::random_labels(rng, {8, 8, 8}, 4);
    const auto seg = oracle::random_labels(rng, {8, 8, 8}, 4);
    // Smallest positive-count foreground class, by counting.
    std::size_t counts[4] = {0, 0, 0, 0};
    for (auto v : y_star.values()) ++counts[v];
    std::uint8_t c_min = 0;
    for (std::uint8_t c = 1; c < 4; ++c) {
      if (counts[c] > 0 && (c_min == 0 || counts[c] < counts[c_min])) c_min = c;
    }
    const auto stats = class_sizes(y_star);
    out.require(stats.min_class == c_min, "c_min");
    double inv_sum = 0.0, lsum = 0.0;
    for (std::uint8_t c = 1; c < 4; ++c)
      if (counts[c]) inv_sum += 1.0 / counts[c];
    for (const auto& [c, l] : stats.lambdas) {
      lsum += l;
      out.require(std::abs(l - (1.0 / counts[c]) / inv_sum) < 1e-12, "lambda value");
    }
    out.require(std::abs(lsum - 1.0) <= 1e-9, "lambda sum");
    const auto fused = size_aware_fuse(y_star, seg, FusionMode::Hard);
    for (std::size_t i = 0; i < fused.voxel_count(); ++i) {
      out.require((fused[i] == c_min) == (y_star[i] == c_min), "c_min voxel set");
      if (y_star[i] != c_min) {
        out.require(fused[i] == (seg[i] == c_min ? 0 : seg[i]), "passthrough");
      }
    }
  }
  std::vector<std::uint8_t> a(64, 0), b(64, 0);
  for (int i = 0; i < 20; ++i) a[i] = 1;
  for (int i = 10; i < 40; ++i) b[i] = 1;
  const LabelVolume single(GridShape({4, 4, 4}), 2, a), seg(GridShape({4, 4, 4}), 2, b);
  out.require(fusion_bypassed(single) && fuse_or_bypass(single, seg) == seg, "bypass");
  if (out.pass) out.detail = "100 pairs exact, bypass on single-class input";
  return out;
}

double mean_foreground_dice(const LabelVolume& pred, const LabelVolume& gt) {
  double s = 0.0;
  for (int c = 1; c < 4; ++c) s += oracle::dice(pred, gt, c);
  return s / 3.0;
}

Outcome end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  double baseline = 0.0, adapted = 0.0;
  for (int s = 0; s < 20; ++s) {
    PhantomSpec ps;
    ps.seed = s;
    const auto gt = make_phantom(ps).labels;
    CorruptionSpec cs;
    cs.seed = 1000 + s;
    cs.flip_rate = 0.1;
    cs.boundary_blur_sigma = 1.0;
    const auto prob = corrupt_probmap(gt, cs);
    PipelineConfig cfg;
    cfg.seed = s;
    baseline += mean_foreground_dice(argmax_labels(prob), gt);
    adapted += mean_foreground_dice(run_pipeline(prob, ProviderConfig{}, cfg).output, gt);
  }
  baseline /= 20.0;
  adapted /= 20.0;
  const double t = seconds_since(t0);
  const double gain = 100.0 * (adapted - baseline);
  out.require(gain >= 5.0, fmt("gain %.2f Dice points", gain));
  out.require(t < 120.0, fmt("runtime %.1f s", t));
  if (out.pass) {
    out.detail = fmt("baseline %.4f, pipeline %.4f, gain %.2f points, %.1f s", baseline,
                     adapted, gain, t);
  }
  return out;
}

Outcome metrics_oracles() {
  Outcome out;
  Rng rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> dims;
    const bool three_d = rng.uniform() < 0.5;
    for (int k = 0; k < (three_d ? 3 : 2); ++k) dims.push_back(4 + rng.below(13));
    const auto a = oracle::random_labels(rng, dims, 3);
    const auto b = oracle::random_labels(rng, dims, 3);
    const std::vector<double> unit(dims.size(), 1.0);
    for (int c = 1; c < 3; ++c) {
      out.require(dice(a, b, c) == oracle::dice(a, b, c), "dice mismatch");
      const double d = std::abs(asd(a, b, c) - oracle::asd(a, b, c, unit));
      worst = std::max(worst, d);
      out.require(d <= 1e-6, fmt("asd error %.3g", d));
      out.require(asd(a, a, c) == 0.0, "asd(pred, pred) != 0");
      const std::vector<double> iso(dims.size(), 1.7);
      out.require(std::abs(asd(a, b, c, iso) - 1.7 * asd(a, b, c)) <= 1e-9,
                  "asd not linear in spacing");
    }
  }
  if (out.pass) out.detail = fmt("50 pairs, max asd error %.2g", worst);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome out;
  const auto dir = std::filesystem::temp_directory_path() / "sfseg_acceptance";
  std::filesystem::create_directories(dir);
  PhantomSpec ps;
  ps.seed = 21;
  CorruptionSpec cs;
  cs.seed = 22;
  npy::write_array(dir / "prob.npy", corrupt_probmap(make_phantom(ps).labels, cs));
  PipelineConfig cfg;
  cfg.seed = 23;
  const auto a = run_pipeline_files(dir / "prob.npy", ProviderConfig{}, cfg, dir / "a.npy");
  const auto b = run_pipeline_files(dir / "prob.npy", ProviderConfig{}, cfg, dir / "b.npy");
  out.require(a.exit_code == 0 && b.exit_code == 0, "pipeline failed");
  out.require(slurp(dir / "a.npy") == slurp(dir / "b.npy"), "output arrays differ");
  out.require(a.report.dump(2) == b.report.dump(2), "reports differ");
  if (out.pass) out.detail = "outputs and reports byte-identical";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1  entropy exactness", entropy_exactness},
      {"2  entropy mask oracle", entropy_mask_oracle},
      {"3  NIG variance", nig_variance_check},
      {"4  NIG density", nig_density},
      {"5  Canny geometry", canny_geometry},
      {"6  consistency score oracle", consistency_oracle},
      {"7  planted-best selection", planted_selection},
      {"8  fusion exactness", fusion_exactness},
      {"9  end-to-end synthetic adaptation", end_to_end},
      {"10 metrics oracles", metrics_oracles},
      {"11 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %-36s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
