#include "wkm/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "wkm/error.hpp"
#include "wkm/parallel.hpp"
#include "wkm/sampling.hpp"

namespace wkm {

namespace {

constexpr std::uint64_t kTupleStreamTag = 0x7475706c65ULL;  // "tuple"
constexpr std::uint64_t kSampleStreamTag = 0x73616d706cULL;  // "sampl"
constexpr std::size_t kBatchSize = 512;

// ceil() that ignores representation noise, so 1600 / 0.04 gives 40000.
std::uint64_t ceil_count(double x) {
  const double r = std::round(x);
  const double v = std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(x)) ? r : std::ceil(x);
  if (!std::isfinite(v) || v > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
    throw FeasibilityError("derived sample size too large");
  }
  return static_cast<std::uint64_t>(v);
}

void require_positive(const std::optional<double>& v, const char* what) {
  if (v && !(*v > 0.0 && std::isfinite(*v))) throw InputError(std::string(what) + " must be positive");
}

// Lexicographic successor of a sorted m-subset of [0, n). False at the last subset.
bool next_combination(std::span<std::uint32_t> sel, std::size_t n) {
  const std::size_t m = sel.size();
  for (std::size_t i = m; i-- > 0;) {
    if (sel[i] < n - m + i) {
      ++sel[i];
      for (std::size_t j = i + 1; j < m; ++j) sel[j] = sel[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Robert Floyd's algorithm for a uniform m-subset of [0, n).
void random_subset(std::span<std::uint32_t> out, std::size_t n, RandomSource& rng) {
  const std::size_t m = out.size();
  std::size_t filled = 0;
  std::unordered_set<std::uint32_t> seen;
  const bool use_set = m > 32;
  auto contains = [&](std::uint32_t v) {
    if (use_set) return seen.count(v) > 0;
    return std::find(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(filled), v) !=
           out.begin() + static_cast<std::ptrdiff_t>(filled);
  };
  for (std::size_t j = n - m; j < n; ++j) {
    auto t = static_cast<std::uint32_t>(rng.below(j + 1));
    if (contains(t)) t = static_cast<std::uint32_t>(j);
    out[filled++] = t;
    if (use_set) seen.insert(t);
  }
  std::sort(out.begin(), out.end());
}

struct Candidate {
  CenterSet centers;
  double cost;
};

// Core of one (trial, tuple) evaluation; cost is on `points` as given.
Candidate build_candidate(const WeightedPointSet& points, const CandidateTuple& tuple, const PtasParams& params,
                          RandomSource rng, SampleMemo* memo) {
  DistanceCache cache(points.size());
  CenterSet centers(points.dim());
  std::vector<std::size_t> fresh(params.sample_size);
  std::vector<std::size_t> chosen(params.subset_size);

  for (std::size_t round = 0; round < params.k; ++round) {
    const SamplingWeights weights = cache.weights(points);
    if (weights.degenerate()) {
      // Every point already sits on a center.
      const Point first(centers.center(0).begin(), centers.center(0).end());
      while (centers.size() < params.k) centers.add(first);
      break;
    }
    const CategoricalSampler sampler(weights);
    const std::vector<std::size_t>* sample = &fresh;
    if (params.share_samples) {
      const std::uint64_t key = tuple.prefix_key(round);
      RandomSource round_rng = rng.fork(key);
      auto draw = [&](std::vector<std::size_t>& dst) {
        dst.resize(params.sample_size);
        for (auto& idx : dst) idx = sampler(round_rng);
      };
      if (memo != nullptr) {
        auto [it, inserted] = memo->try_emplace(key);
        if (inserted) draw(it->second);
        sample = &it->second;
      } else {
        draw(fresh);
      }
    } else {
      for (auto& idx : fresh) idx = sampler(rng);
    }
    const auto selector = tuple.selector(round);
    for (std::size_t j = 0; j < chosen.size(); ++j) chosen[j] = (*sample)[selector[j]];
    const Point c = weighted_centroid(points, chosen);
    centers.add(c);
    cache.add_center(c, points);
  }
  return {std::move(centers), cache.cost(points)};
}

RunMeta ptas_meta(const PtasParams& params, std::uint64_t seed) {
  RunMeta meta;
  meta.solver = "ptas";
  meta.seed = seed;
  meta.params = {
      {"k", std::to_string(params.k)},
      {"epsilon", format_number(params.epsilon)},
      {"working_epsilon", format_number(params.working_epsilon)},
      {"c1", format_number(params.c1)},
      {"c2", format_number(params.c2)},
      {"N", std::to_string(params.sample_size)},
      {"M", std::to_string(params.subset_size)},
      {"trials", std::to_string(params.trials)},
      {"tuple_budget", params.tuple_budget ? std::to_string(*params.tuple_budget) : std::string("exhaustive")},
      {"adjust_epsilon", params.adjust_epsilon ? "true" : "false"},
      {"share_samples", params.share_samples ? "true" : "false"},
  };
  return meta;
}

}  // namespace

PtasParams derive_params(std::size_t k, double epsilon, const PtasOverrides& overrides) {
  if (k == 0) throw InputError("k must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  require_positive(overrides.c1, "c1");
  require_positive(overrides.c2, "c2");
  if (overrides.trials && *overrides.trials == 0) throw InputError("trials must be positive");
  if (overrides.tuple_budget && *overrides.tuple_budget == 0) throw InputError("tuple budget must be positive");

  PtasParams p;
  p.k = k;
  p.epsilon = epsilon;
  p.adjust_epsilon = overrides.adjust_epsilon;
  p.working_epsilon = overrides.adjust_epsilon ? epsilon / ((1.0 + epsilon / 2.0) * static_cast<double>(k)) : epsilon;
  p.c1 = overrides.c1.value_or(kPaperC1);
  p.c2 = overrides.c2.value_or(kPaperC2);
  if (overrides.trials) {
    p.trials = *overrides.trials;
  } else {
    if (k >= 63) throw FeasibilityError("2^k trials overflow; set trials explicitly");
    p.trials = std::uint64_t{1} << k;
  }
  p.tuple_budget = overrides.exhaustive ? std::nullopt
                                        : std::optional<std::uint64_t>(overrides.tuple_budget.value_or(kDefaultTupleBudget));
  p.share_samples = overrides.share_samples;
  p.threads = std::max(1U, overrides.threads);

  const double eps2 = p.working_epsilon * p.working_epsilon;
  p.sample_size = ceil_count(p.c1 * static_cast<double>(k) / eps2);
  p.subset_size = ceil_count(p.c2 / p.working_epsilon);
  if (p.subset_size < 1 || p.sample_size < p.subset_size) {
    throw InputError("derived M=" + std::to_string(p.subset_size) + " exceeds N=" + std::to_string(p.sample_size));
  }
  return p;
}

std::pair<WeightedPointSet, double> rescale_weights(const WeightedPointSet& points) {
  const auto w = points.weights();
  const double scale = *std::min_element(w.begin(), w.end());
  std::vector<double> scaled(w.begin(), w.end());
  for (auto& x : scaled) x /= scale;
  return {points.with_weights(std::move(scaled)), scale};
}

CandidateTuple::CandidateTuple(std::size_t k, std::size_t subset_size, std::vector<std::uint32_t> positions)
    : k_(k), m_(subset_size), positions_(std::move(positions)) {
  if (positions_.size() != k_ * m_) throw InputError("candidate tuple must hold k selectors of M positions");
  for (std::size_t i = 0; i < k_; ++i) {
    const auto sel = selector(i);
    if (std::adjacent_find(sel.begin(), sel.end(), std::greater_equal<>()) != sel.end()) {
      throw InputError("selector positions must be strictly increasing");
    }
  }
}

std::uint64_t CandidateTuple::prefix_key(std::size_t rounds) const noexcept {
  std::uint64_t h = mix64(rounds);
  for (std::size_t i = 0; i < rounds * m_; ++i) h = mix64(h ^ positions_[i]);
  return h;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t m, std::uint64_t cap) {
  if (m > n) return 0;
  m = std::min(m, n - m);
  u128 c = 1;
  for (std::uint64_t i = 0; i < m; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

TupleStream::TupleStream(std::size_t sample_size, std::size_t subset_size, std::size_t k,
                         std::optional<std::uint64_t> budget, RandomSource rng)
    : n_(sample_size), m_(subset_size), k_(k), exhaustive_(!budget), count_(0), rng_(rng) {
  if (k_ == 0 || m_ == 0 || m_ > n_) throw InputError("tuple stream needs 1 <= M <= N and k >= 1");
  if (exhaustive_) {
    const std::uint64_t per_round = binomial_capped(n_, m_, kMaxExhaustiveTuples);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k_; ++i) {
      if (per_round > kMaxExhaustiveTuples || total > kMaxExhaustiveTuples / per_round) {
        throw FeasibilityError("enumeration infeasible; set tuple_budget");
      }
      total *= per_round;
    }
    count_ = total;
    current_.resize(k_ * m_);
    for (std::size_t i = 0; i < k_; ++i) {
      std::iota(current_.begin() + static_cast<std::ptrdiff_t>(i * m_),
                current_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_), 0U);
    }
  } else {
    count_ = *budget;
  }
}

std::optional<CandidateTuple> TupleStream::next() {
  if (emitted_ == count_) return std::nullopt;
  ++emitted_;
  if (exhaustive_) {
    CandidateTuple out(k_, m_, current_);
    for (std::size_t r = k_; r-- > 0;) {
      std::span<std::uint32_t> sel(current_.data() + r * m_, m_);
      if (next_combination(sel, n_)) break;
      std::iota(sel.begin(), sel.end(), 0U);
    }
    return out;
  }
  std::vector<std::uint32_t> positions(k_ * m_);
  for (std::size_t r = 0; r < k_; ++r) {
    random_subset(std::span<std::uint32_t>(positions.data() + r * m_, m_), n_, rng_);
  }
  return CandidateTuple(k_, m_, std::move(positions));
}

TupleStream enumerate_or_sample_tuples(const PtasParams& params, RandomSource rng) {
  return {params.sample_size, params.subset_size, params.k, params.tuple_budget, rng};
}

ClusteringResult run_trial(const WeightedPointSet& points, const CandidateTuple& tuple, const PtasParams& params,
                           RandomSource rng, SampleMemo* memo) {
  if (tuple.k() != params.k || tuple.subset_size() != params.subset_size) {
    throw InputError("candidate tuple does not match parameters");
  }
  Candidate c = build_candidate(points, tuple, params, rng, memo);
  return evaluate(points, std::move(c.centers), ptas_meta(params, rng.seed()));
}

std::vector<std::size_t> distinct_point_indices(const WeightedPointSet& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = points.point(a);
    const auto pb = points.point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::stable_sort(order.begin(), order.end(), less);
  std::vector<std::size_t> firsts;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || less(order[i - 1], order[i])) firsts.push_back(order[i]);
  }
  std::sort(firsts.begin(), firsts.end());
  return firsts;
}

ClusteringResult solve(const WeightedPointSet& points, std::size_t k, double epsilon, const PtasOverrides& overrides,
                       std::uint64_t master_seed, const PtasObserver& observer) {
  const PtasParams params = derive_params(k, epsilon, overrides);

  const auto distinct = distinct_point_indices(points);
  if (k >= distinct.size()) {
    CenterSet centers(points.dim());
    for (std::size_t i : distinct) centers.add(points.point(i));
    while (centers.size() < k) centers.add(points.point(distinct.front()));
    RunMeta meta = ptas_meta(params, master_seed);
    meta.params.emplace_back("exact_fit", "true");
    return evaluate(points, std::move(centers), std::move(meta));
  }

  const auto [scaled, scale] = rescale_weights(points);
  const RandomSource root(master_seed);
  const unsigned threads = params.threads;

  CenterSet best(points.dim());
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;

  for (std::uint64_t trial = 0; trial < params.trials; ++trial) {
    TupleStream stream = enumerate_or_sample_tuples(params, root.fork(kTupleStreamTag).fork(trial));
    const RandomSource trial_samples = root.fork(kSampleStreamTag).fork(trial);
    std::uint64_t tuple_index = 0;
    std::vector<CandidateTuple> batch;
    while (true) {
      batch.clear();
      while (batch.size() < kBatchSize) {
        auto t = stream.next();
        if (!t) break;
        batch.push_back(std::move(*t));
      }
      if (batch.empty()) break;

      // Contiguous chunks, one memo each; results do not depend on the split.
      std::vector<Candidate> out(batch.size());
      const std::size_t chunks = std::min<std::size_t>(batch.size(), std::size_t{threads} * 4);
      parallel_for(chunks, threads, [&](std::size_t chunk) {
        SampleMemo memo;
        const std::size_t lo = chunk * batch.size() / chunks;
        const std::size_t hi = (chunk + 1) * batch.size() / chunks;
        for (std::size_t i = lo; i < hi; ++i) {
          const RandomSource rng = params.share_samples ? trial_samples : trial_samples.fork(tuple_index + i);
          out[i] = build_candidate(scaled, batch[i], params, rng, params.share_samples ? &memo : nullptr);
        }
      });

      for (std::size_t i = 0; i < out.size(); ++i) {
        const double cost = out[i].cost * scale;
        if (observer) observer({trial, tuple_index + i, cost});
        if (cost < best_cost) {
          best_cost = cost;
          best = std::move(out[i].centers);
        }
      }
      tuple_index += batch.size();
      evaluated += batch.size();
    }
  }

  RunMeta meta = ptas_meta(params, master_seed);
  meta.iterations = evaluated;
  return evaluate(points, std::move(best), std::move(meta));
}

}  // namespace wkm
