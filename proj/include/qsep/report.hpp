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

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsep/estimator.hpp"

namespace qsep::report {

inline constexpr const char* kTraceHeader = "block,points,sep_estimate,abs_sep_estimate,discards,ess";

inline void write_trace_row(std::ostream& os, const TraceRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%.10g,%.10g,%llu,%.6g\n",
                static_cast<unsigned long long>(row.block),
                static_cast<unsigned long long>(row.points), row.sep_estimate, row.abs_sep_estimate,
                static_cast<unsigned long long>(row.discards), row.ess);
  os << buf;
}

inline void write_trace(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceHeader << '\n';
  for (const TraceRow& r : rows) write_trace_row(os, r);
}

/// JSON number or null for NaN / infinities.
inline nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

struct SummaryInput {
  MeasureKind measure;
  double alpha0 = 0.5;
  std::uint64_t points = 0;
  std::uint64_t block_size = 0;
  TruncationPolicy policy;
  double wall_seconds = 0.0;
};

inline nlohmann::json summary(const SummaryInput& in, const EstimatorState& state) {
  nlohmann::json j;
  j["measure"] = to_string(in.measure);
  j["alpha0"] = in.alpha0;
  j["points"] = in.points;
  j["block"] = in.block_size;
  j["policy"] = in.policy.to_string();
  j["accepted"] = state.count();
  j["discards"] = state.discard_count();
  j["rejected"] = state.rejected_count();
  if (const auto est = state.current_estimate()) {
    j["sep_estimate"] = est->sep_probability;
    j["abs_sep_estimate"] = est->abs_sep_probability;
    j["ess"] = number_or_null(est->effective_sample_size);
    j["ess_fraction"] = number_or_null(est->effective_sample_size / static_cast<double>(in.points));
  } else {
    j["sep_estimate"] = nullptr;
    j["abs_sep_estimate"] = nullptr;
    j["ess"] = nullptr;
    j["ess_fraction"] = nullptr;
  }
  nlohmann::json bins = nlohmann::json::array();
  for (const BinEstimate& b : state.bin_estimates()) {
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"count", b.sample_count},
                    {"sep_estimate", number_or_null(b.sep_probability)}});
  }
  j["bloch_bins_a"] = bins;
  j["wall_seconds"] = in.wall_seconds;
  return j;
}

}  // namespace qsep::report
