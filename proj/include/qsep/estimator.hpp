// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qsep/lds.hpp"
#include "qsep/measures.hpp"
#include "qsep/septest.hpp"
#include "qsep/statespace.hpp"

/// Weighted-ratio estimation of separability probabilities.
///
/// Each sample carries a log-weight (coset density plus eigenvalue density).
/// Weights are accumulated as exp(log_weight - log_shift) in Neumaier
/// compensated sums; the shift is raised whenever a new log-weight exceeds
/// it by more than kShiftHeadroom, so no exp() can overflow.
namespace qsep {

/// Neumaier (improved Kahan-Babuska) compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void scale(double factor) {
    sum_ *= factor;
    comp_ *= factor;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct TruncationPolicy {
  enum class Mode { None, WeightCap, EigenFloor };

  Mode mode = Mode::None;
  double value = 0.0;  // log cap for WeightCap, eigenvalue floor for EigenFloor

  static TruncationPolicy none() { return {}; }
  static TruncationPolicy weight_cap(double log_cap) { return {Mode::WeightCap, log_cap}; }
  static TruncationPolicy eigen_floor(double delta) {
    if (!(delta > 0.0)) throw std::domain_error("eigen floor must be positive");
    return {Mode::EigenFloor, delta};
  }

  /// "none", "weight-cap:<log cap>" or "eigen-floor:<delta>".
  static std::optional<TruncationPolicy> parse(const std::string& text) {
    if (text == "none") return none();
    const auto colon = text.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const std::string head = text.substr(0, colon);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (head == "weight-cap" && std::isfinite(v)) return weight_cap(v);
    if (head == "eigen-floor" && v > 0.0 && std::isfinite(v)) return eigen_floor(v);
    return std::nullopt;
  }

  std::string to_string() const {
    switch (mode) {
      case Mode::None: return "none";
      case Mode::WeightCap: return "weight-cap:" + format(value);
      case Mode::EigenFloor: return "eigen-floor:" + format(value);
    }
    return "none";
  }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }
};

struct WeightedSample {
  LogWeight log_weight;
  SepFlags flags;
  BlochRadii radii;
  std::uint64_t index = 0;
  double min_eigenvalue = 0.0;
};

struct Estimate {
  double sep_probability = 0.0;
  double abs_sep_probability = 0.0;
  double effective_sample_size = 0.0;
};

struct BinEstimate {
  double lo = 0.0;
  double hi = 0.0;
  double sep_probability = std::numeric_limits<double>::quiet_NaN();
  double abs_sep_probability = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t sample_count = 0;
};

struct TraceRow {
  std::uint64_t block = 0;
  std::uint64_t points = 0;
  double sep_estimate = 0.0;
  double abs_sep_estimate = 0.0;
  std::uint64_t discards = 0;
  double ess = 0.0;
};

struct EstimatorConfig {
  int bins = 10;
  std::uint64_t block_size = 2'000'000;
};

class EstimatorState {
 public:
  static constexpr double kShiftHeadroom = 300.0;

  explicit EstimatorState(EstimatorConfig config = {}) : config_(config) {
    if (config_.bins < 1) throw std::domain_error("bin count must be >= 1");
    if (config_.block_size < 1) throw std::domain_error("block size must be >= 1");
    bins_.resize(static_cast<std::size_t>(config_.bins));
  }

  const EstimatorConfig& config() const { return config_; }

  void accumulate(const WeightedSample& sample, const TruncationPolicy& policy) {
    ++points_seen_;
    if (policy.mode == TruncationPolicy::Mode::EigenFloor &&
        sample.min_eigenvalue < policy.value) {
      ++rejected_count_;
      return;
    }
    if (!sample.log_weight.finite) {
      ++discard_count_;
      return;
    }
    double lw = sample.log_weight.log_value;
    if (policy.mode == TruncationPolicy::Mode::WeightCap) {
      lw = std::min(lw, policy.value);
    }
    ++count_;
    Bin& bin = bins_[bin_index(sample.radii.r_a)];
    ++bin.count;
    if (lw == -std::numeric_limits<double>::infinity()) {
      return;
    }
    if (!has_shift_) {
      log_shift_ = lw;
      has_shift_ = true;
    } else if (lw > log_shift_ + kShiftHeadroom) {
      rebase(lw);
    }
    const double w = std::exp(lw - log_shift_);
    total_.add(w);
    squares_.add(w * w);
    bin.total.add(w);
    if (sample.flags.separable) {
      sep_.add(w);
      bin.sep.add(w);
    }
    if (sample.flags.absolutely_separable) {
      abs_.add(w);
      bin.abs.add(w);
    }
  }

  /// Folds in a state covering a later, disjoint index range.
  void merge(const EstimatorState& other) {
    if (other.bins_.size() != bins_.size()) {
      throw std::domain_error("cannot merge estimator states with different binning");
    }
    points_seen_ += other.points_seen_;
    count_ += other.count_;
    discard_count_ += other.discard_count_;
    rejected_count_ += other.rejected_count_;
    for (std::size_t b = 0; b < bins_.size(); ++b) bins_[b].count += other.bins_[b].count;
    if (!other.has_shift_) return;
    if (!has_shift_) {
      log_shift_ = other.log_shift_;
      has_shift_ = true;
    } else if (other.log_shift_ > log_shift_) {
      rebase(other.log_shift_);
    }
    const double f = std::exp(other.log_shift_ - log_shift_);
    merge_scaled(total_, other.total_, f);
    merge_scaled(sep_, other.sep_, f);
    merge_scaled(abs_, other.abs_, f);
    merge_scaled(squares_, other.squares_, f * f);
    for (std::size_t b = 0; b < bins_.size(); ++b) {
      merge_scaled(bins_[b].total, other.bins_[b].total, f);
      merge_scaled(bins_[b].sep, other.bins_[b].sep, f);
      merge_scaled(bins_[b].abs, other.bins_[b].abs, f);
    }
  }

  /// Weighted ratios and ESS = (sum w)^2 / sum w^2; nullopt when no weight
  /// has been accumulated.
  std::optional<Estimate> current_estimate() const {
    const double total = total_.value();
    if (!(total > 0.0)) return std::nullopt;
    const double sep = std::clamp(sep_.value() / total, 0.0, 1.0);
    const double abs = std::clamp(abs_.value() / total, 0.0, sep);
    return Estimate{sep, abs, total * total / squares_.value()};
  }

  std::vector<BinEstimate> bin_estimates() const {
    std::vector<BinEstimate> out;
    out.reserve(bins_.size());
    const double width = 1.0 / static_cast<double>(bins_.size());
    for (std::size_t b = 0; b < bins_.size(); ++b) {
      BinEstimate e;
      e.lo = width * static_cast<double>(b);
      e.hi = b + 1 == bins_.size() ? 1.0 : width * static_cast<double>(b + 1);
      e.sample_count = bins_[b].count;
      const double total = bins_[b].total.value();
      if (total > 0.0) {
        e.sep_probability = bins_[b].sep.value() / total;
        e.abs_sep_probability = bins_[b].abs.value() / total;
      }
      out.push_back(e);
    }
    return out;
  }

  /// Appends a trace row for the block_index-th completed block (1-based).
  /// Returns nullopt and appends nothing while the state is empty.
  std::optional<TraceRow> emit_trace_row(std::uint64_t block_index) {
    if (points_seen_ == 0) return std::nullopt;
    TraceRow row;
    row.block = block_index;
    row.points = block_index * config_.block_size;
    row.discards = discard_count_ + rejected_count_;
    if (const auto est = current_estimate()) {
      row.sep_estimate = est->sep_probability;
      row.abs_sep_estimate = est->abs_sep_probability;
      row.ess = est->effective_sample_size;
    } else {
      row.sep_estimate = row.abs_sep_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    trace_.push_back(row);
    return row;
  }

  const std::vector<TraceRow>& trace() const { return trace_; }
  std::uint64_t points_seen() const { return points_seen_; }
  std::uint64_t count() const { return count_; }
  std::uint64_t discard_count() const { return discard_count_; }
  std::uint64_t rejected_count() const { return rejected_count_; }
  std::optional<double> log_shift() const {
    return has_shift_ ? std::optional<double>(log_shift_) : std::nullopt;
  }

  /// Shift-invariant totals, as logs: log(sum w), log(sum_sep w), log(sum_abs w).
  double log_total_weight() const { return log_shift_ + std::log(total_.value()); }

 private:
  struct Bin {
    CompensatedSum total;
    CompensatedSum sep;
    CompensatedSum abs;
    std::uint64_t count = 0;
  };

  std::size_t bin_index(double r) const {
    const double scaled = r * static_cast<double>(bins_.size());
    if (!(scaled > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(scaled), bins_.size() - 1);
  }

  void rebase(double new_shift) {
    const double f = std::exp(log_shift_ - new_shift);
    total_.scale(f);
    sep_.scale(f);
    abs_.scale(f);
    squares_.scale(f * f);
    for (Bin& b : bins_) {
      b.total.scale(f);
      b.sep.scale(f);
      b.abs.scale(f);
    }
    log_shift_ = new_shift;
  }

  static void merge_scaled(CompensatedSum& into, CompensatedSum from, double factor) {
    if (factor != 1.0) from.scale(factor);
    into.merge(from);
  }

  EstimatorConfig config_;
  bool has_shift_ = false;
  double log_shift_ = 0.0;
  CompensatedSum total_;
  CompensatedSum sep_;
  CompensatedSum abs_;
  CompensatedSum squares_;
  std::uint64_t points_seen_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t discard_count_ = 0;
  std::uint64_t rejected_count_ = 0;
  std::vector<Bin> bins_;
  std::vector<TraceRow> trace_;
};

// ---------------------------------------------------------------------------
// Streaming driver

using SequenceStream = QuasirandomStream<kUnitCoordinates>;

/// One estimator fed by the shared point stream.
struct Channel {
  MeasureKind measure;
  TruncationPolicy policy;
};

struct RunPlan {
  double alpha0 = 0.5;
  std::uint64_t offset = 0;  // first sequence index
  std::uint64_t points = 0;
  std::uint64_t block_size = 2'000'000;
  std::uint64_t chunk_size = std::uint64_t{1} << 16;
  int bins = 10;
  unsigned workers = 1;
  std::vector<Channel> channels;
};

struct RunResult {
  std::vector<EstimatorState> channels;
  double wall_seconds = 0.0;
};

/// Per-point quantities shared by all channels.
struct PointEvaluation {
  Spectrum spectrum;
  SepFlags flags;
  BlochRadii radii;
  double log_haar = 0.0;
};

inline PointEvaluation evaluate_point(const Point<kUnitCoordinates>& u) {
  const SampledState state = assemble_state(u);
  PointEvaluation out;
  out.spectrum = state.spectrum;
  out.flags = classify(state.rho, state.spectrum);
  out.radii = reduced_bloch_radii(state.rho);
  out.log_haar = std::log(state.haar_weight);
  return out;
}

inline WeightedSample make_sample(const PointEvaluation& p, const MeasureKind& measure,
                                  std::uint64_t index) {
  WeightedSample s;
  s.log_weight = eig_weight_log(measure, p.spectrum);
  if (s.log_weight.finite) s.log_weight += p.log_haar;
  s.flags = p.flags;
  s.radii = p.radii;
  s.index = index;
  s.min_eigenvalue = p.spectrum.min();
  return s;
}

namespace detail {

inline void process_range(const SequenceStream& stream, const RunPlan& plan,
                          std::uint64_t start, std::uint64_t count,
                          std::vector<EstimatorState>& states) {
  for (std::uint64_t n = start; n < start + count; ++n) {
    const std::uint64_t index = plan.offset + n;
    const PointEvaluation p = evaluate_point(stream.point(index));
    const MeasureKind* last_measure = nullptr;
    WeightedSample sample;
    for (std::size_t c = 0; c < plan.channels.size(); ++c) {
      const Channel& ch = plan.channels[c];
      if (last_measure == nullptr || !(*last_measure == ch.measure)) {
        sample = make_sample(p, ch.measure, index);
        last_measure = &ch.measure;
      }
      states[c].accumulate(sample, ch.policy);
    }
  }
}

}  // namespace detail

/// Streams points offset .. offset + points - 1 through the pipeline.
///
/// Points are split into blocks of block_size (one trace row per complete
/// block) and each block into chunks of chunk_size consecutive indices.
/// Chunks may run on any worker; their partial states are merged in chunk
/// order, so the result is bit-identical for every worker count.
inline RunResult run_estimation(
    const RunPlan& plan,
    const std::function<void(std::uint64_t, const std::vector<EstimatorState>&)>& on_block = {}) {
  if (plan.channels.empty()) throw std::domain_error("run_estimation: no channels");
  if (plan.block_size == 0 || plan.chunk_size == 0) {
    throw std::domain_error("run_estimation: block and chunk sizes must be positive");
  }
  if (plan.points > std::numeric_limits<std::uint64_t>::max() - plan.offset) {
    throw std::domain_error("run_estimation: index range exceeds 2^64");
  }
  const auto started = std::chrono::steady_clock::now();
  const SequenceStream stream(plan.alpha0);
  const EstimatorConfig config{plan.bins, plan.block_size};
  RunResult result;
  result.channels.assign(plan.channels.size(), EstimatorState(config));
  const unsigned workers = std::max(1u, plan.workers);

  std::uint64_t block_index = 0;
  for (std::uint64_t block_start = 0; block_start < plan.points; block_start += plan.block_size) {
    const std::uint64_t block_len = std::min(plan.block_size, plan.points - block_start);
    const std::uint64_t n_chunks = (block_len + plan.chunk_size - 1) / plan.chunk_size;
    std::vector<std::vector<EstimatorState>> partial(
        n_chunks, std::vector<EstimatorState>(plan.channels.size(), EstimatorState(config)));
    auto run_chunk = [&](std::uint64_t c) {
      const std::uint64_t begin = block_start + c * plan.chunk_size;
      const std::uint64_t len = std::min(plan.chunk_size, block_start + block_len - begin);
      detail::process_range(stream, plan, begin, len, partial[c]);
    };
    if (workers == 1 || n_chunks == 1) {
      for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
      std::atomic<std::uint64_t> next{0};
      std::vector<std::jthread> pool;
      const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));
      pool.reserve(n_threads);
      for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
          for (std::uint64_t c = next++; c < n_chunks; c = next++) run_chunk(c);
        });
      }
    }
    for (const auto& chunk : partial) {
      for (std::size_t ch = 0; ch < chunk.size(); ++ch) result.channels[ch].merge(chunk[ch]);
    }
    if (block_len == plan.block_size) {
      ++block_index;
      for (EstimatorState& s : result.channels) s.emit_trace_row(block_index);
      if (on_block) on_block(block_index, result.channels);
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qsep
