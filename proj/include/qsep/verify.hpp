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
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qsep/refvalues.hpp"

namespace qsep::verify {

/// One row of the verification report.
struct Check {
  std::string quantity;
  std::optional<double> computed;   // nullopt: infinite / divergent
  std::optional<double> reference;  // nullopt: infinity expected
  double tolerance = 0.0;
  bool relative = false;
  bool informational = false;  // reported but never fails
  bool converged = true;

  double abs_deviation() const {
    if (!computed || !reference) return computed.has_value() == reference.has_value() ? 0.0 : INFINITY;
    return std::abs(*computed - *reference);
  }
  double rel_deviation() const {
    if (!computed || !reference) return abs_deviation();
    return *reference == 0.0 ? abs_deviation() : abs_deviation() / std::abs(*reference);
  }
  bool within_tolerance() const {
    if (!computed || !reference) return computed.has_value() == reference.has_value();
    const double dev = relative ? rel_deviation() : abs_deviation();
    return dev <= tolerance;
  }
  bool passed() const { return informational || (converged && within_tolerance()); }
};

/// Evaluates named quantities, memoizing the expensive quadratures they share.
class Catalog {
 public:
  Catalog() { register_all(); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, fn] : entries_) out.push_back(name);
    return out;
  }

  bool contains(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == name; });
  }

  Check evaluate(const std::string& name) {
    for (auto& [n, fn] : entries_) {
      if (n == name) {
        Check c = fn();
        c.quantity = n;
        return c;
      }
    }
    throw std::out_of_range("unknown quantity '" + name + "'");
  }

  std::vector<Check> evaluate_all() {
    std::vector<Check> out;
    for (const auto& [n, fn] : entries_) out.push_back(evaluate(n));
    return out;
  }

 private:
  using Entry = std::pair<std::string, std::function<Check()>>;

  const SepProbQuadrature& sep_prob(int d, ExponentFamily f) {
    const auto key = std::make_pair(d, static_cast<int>(f));
    auto it = sep_prob_.find(key);
    if (it == sep_prob_.end()) it = sep_prob_.emplace(key, sep_prob_quadrature(d, f)).first;
    return it->second;
  }

  const AbsSepQuadrature& abs_sep(const MeasureKind& k) {
    const std::string key = to_string(k);
    auto it = abs_sep_.find(key);
    if (it == abs_sep_.end()) it = abs_sep_.emplace(key, abs_sep_quadrature(k)).first;
    return it->second;
  }

  void add(std::string name, std::function<Check()> fn) {
    entries_.emplace_back(std::move(name), std::move(fn));
  }

  void add_sep_prob(const std::string& name, int d, ExponentFamily f, int part,
                    std::optional<double> reference, double tol) {
    add(name, [this, d, f, part, reference, tol] {
      const SepProbQuadrature& q = sep_prob(d, f);
      Check c;
      c.reference = reference;
      c.tolerance = tol;
      c.converged = q.converged;
      switch (part) {
        case 0: c.computed = q.numerator; break;
        case 1: c.computed = q.denominator; break;
        default: c.computed = q.ratio; break;
      }
      return c;
    });
  }

  void add_abs_sep(const std::string& name, MeasureKind k, std::optional<double> reference,
                   double rel_tol) {
    add(name, [this, k, reference, rel_tol] {
      const AbsSepQuadrature& q = abs_sep(k);
      Check c;
      c.computed = q.probability;
      c.reference = reference;
      c.tolerance = rel_tol;
      c.relative = true;
      c.converged = q.converged;
      return c;
    });
  }

  void add_volume_ratio(const std::string& name, MeasureTag a, double reference) {
    add(name, [a, reference] {
      const VolumeRatio r =
          qubit_volume_ratio(MeasureKind::of(a), MeasureKind::of(MeasureTag::Bures));
      Check c;
      c.computed = r.ratio;
      c.reference = reference;
      c.tolerance = 1e-6;
      c.converged = r.converged;
      return c;
    });
  }

  void register_all() {
    using F = ExponentFamily;
    const double pi2 = kPi * kPi;
    add_sep_prob("hs-numerator", 2, F::HilbertSchmidt, 0, 2048.0 / 51975, 1e-9);
    add_sep_prob("hs-denominator", 2, F::HilbertSchmidt, 1, 256.0 / 1575, 1e-9);
    add_sep_prob("hs-ratio", 2, F::HilbertSchmidt, 2, 8.0 / 33, 1e-9);
    add_sep_prob("sqrtx-ratio", 2, F::SqrtX, 2, 1.0 - 256.0 / (27.0 * pi2), 1e-6);
    add_sep_prob("sqrtx-denominator", 2, F::SqrtX, 1, pi2 / 2, 1e-8);
    add_sep_prob("alt-ratio", 2, F::Alternative, 2, (593.0 - 60.0 * pi2) / 9, 1e-6);
    add_sep_prob("alt-denominator", 2, F::Alternative, 1, 4.0 / 3, 1e-10);
    add_sep_prob("d1-hs-ratio", 1, F::HilbertSchmidt, 2, 29.0 / 64, 1e-8);
    add_sep_prob("d1-sqrtx-ratio", 1, F::SqrtX, 2, 0.26223, 5e-5);
    add_sep_prob("d4-alt-ratio", 4, F::Alternative, 2, 0.014015, 1e-4);
    add_sep_prob("d4-alt-ratio-closed-form", 4, F::Alternative, 2,
                 3342341.0 / 5 - 72737619968.0 / (11025.0 * pi2), 1e-9);
    add_sep_prob("d4-alt-numerator", 4, F::Alternative, 0,
                 3342341.0 * pi2 / 64 - 1136525312.0 / 2205, 1e-9);
    add_sep_prob("d4-sqrtx-numerator", 4, F::SqrtX, 0, 4.0 * pi2 / 3 - 5513.0 / 420, 1e-9);
    add_sep_prob("d4-sqrtx-denominator", 4, F::SqrtX, 1, std::nullopt, 0.0);

    add("chi1-closed-vs-integral", [] {
      double worst = 0.0;
      bool ok = true;
      for (int k = 1; k <= 99; ++k) {
        const double eps = k / 100.0;
        quad::Result info;
        worst = std::max(worst, std::abs(chi1(eps) - chi1_integral(eps, &info)));
        ok = ok && info.converged;
      }
      Check c;
      c.computed = worst;
      c.reference = 0.0;
      c.tolerance = 1e-10;
      c.converged = ok;
      return c;
    });
    add("chi-series-d2", [] {
      double worst = 0.0;
      for (int k = 1; k <= 99; ++k) {
        const double eps = k / 100.0;
        worst = std::max(worst, std::abs(sep_function_series(2.0, eps) - sep_function(2, eps)));
      }
      Check c;
      c.computed = worst;
      c.reference = 0.0;
      c.tolerance = 1e-12;
      return c;
    });
    add("chi-series-d1", [] {
      double worst = 0.0;
      for (int k = 1; k <= 9; ++k) {
        const double eps = k / 10.0;
        worst = std::max(worst, std::abs(sep_function_series(1.0, eps) - chi1(eps)));
      }
      Check c;
      c.computed = worst;
      c.reference = 0.0;
      c.tolerance = 1e-8;
      return c;
    });
    add("chi4-series-vs-eta4", [] {
      double worst = 0.0;
      for (int k = 1; k <= 99; ++k) {
        const double eps = k / 100.0;
        worst = std::max(worst, std::abs(sep_function_series(4.0, eps) - sep_function(4, eps)));
      }
      Check c;
      c.computed = worst;
      c.reference = 0.0;
      c.tolerance = 1e-12;
      c.informational = true;
      return c;
    });
    add("li2-1", [pi2] {
      Check c;
      c.computed = li2(1.0);
      c.reference = pi2 / 6;
      c.tolerance = 1e-14;
      return c;
    });
    add("hs-abs", [] {
      Check c;
      c.computed = hs_abs_constant();
      c.reference = 0.00365826;
      c.tolerance = 1e-8;
      return c;
    });
    add("hs-abs-forms", [] {
      Check c;
      c.computed = std::abs(hs_abs_constant() - hs_abs_constant_alt_form());
      c.reference = 0.0;
      c.tolerance = 1e-12;
      return c;
    });

    add_abs_sep("abs-sep-hs", MeasureKind::hs(), hs_abs_constant(), 1e-6);
    add_abs_sep("abs-sep-kubo-mori", MeasureKind::of(MeasureTag::KuboMori), 5.04898e-6, 1e-3);
    add_abs_sep("abs-sep-wigner-yanase", MeasureKind::of(MeasureTag::WignerYanase), 3.42309e-5,
                1e-3);
    add_abs_sep("abs-sep-identric", MeasureKind::of(MeasureTag::Identric), 7.62634e-5, 1e-3);
    add_abs_sep("abs-sep-bures", MeasureKind::of(MeasureTag::Bures), 1.61792e-4, 1e-2);
    add_abs_sep("abs-sep-induced1", MeasureKind::induced(1), 0.0232545, 1e-3);
    add_abs_sep("abs-sep-induced2", MeasureKind::induced(2), 0.071067, 1e-3);
    add_abs_sep("abs-sep-induced3", MeasureKind::induced(3), 0.1499309, 1e-3);
    add_abs_sep("abs-sep-induced4", MeasureKind::induced(4), 0.252828, 1e-3);
    add_abs_sep("abs-sep-geometric", MeasureKind::of(MeasureTag::Geometric), std::nullopt, 0.0);

    add_volume_ratio("qubit-volume-km-bures", MeasureTag::KuboMori, 2.0);
    add_volume_ratio("qubit-volume-wy-bures", MeasureTag::WignerYanase, 4.0 * (kPi - 2.0) / kPi);
    add_volume_ratio("qubit-volume-mc-bures", MeasureTag::MorozovaChentsov, pi2 / 2);
  }

  std::vector<Entry> entries_;
  std::map<std::pair<int, int>, SepProbQuadrature> sep_prob_;
  std::map<std::string, AbsSepQuadrature> abs_sep_;
};

inline std::string format_value(const std::optional<double>& v) {
  if (!v) return "infinite";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", *v);
  return buf;
}

inline std::string status_of(const Check& c) {
  if (!c.converged) return "NOCONV";
  if (c.informational) return "INFO";
  return c.within_tolerance() ? "PASS" : "FAIL";
}

inline void write_csv(std::ostream& os, const std::vector<Check>& checks) {
  os << "quantity,computed,reference,abs_deviation,rel_deviation,tolerance,kind,status\n";
  char buf[64];
  for (const Check& c : checks) {
    os << c.quantity << ',' << format_value(c.computed) << ',' << format_value(c.reference) << ',';
    std::snprintf(buf, sizeof buf, "%.3e,%.3e,%.1e", c.abs_deviation(), c.rel_deviation(),
                  c.tolerance);
    os << buf << ',' << (c.relative ? "rel" : "abs") << ',' << status_of(c) << '\n';
  }
}

inline void write_text(std::ostream& os, const std::vector<Check>& checks) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-26s %20s %20s %11s %11s %9s  %s\n", "quantity", "computed",
                "reference", "abs dev", "rel dev", "tol", "status");
  os << buf;
  for (const Check& c : checks) {
    std::snprintf(buf, sizeof buf, "%-26s %20s %20s %11.3e %11.3e %5.0e %s  %s\n",
                  c.quantity.c_str(), format_value(c.computed).c_str(),
                  format_value(c.reference).c_str(), c.abs_deviation(), c.rel_deviation(),
                  c.tolerance, c.relative ? "rel" : "abs", status_of(c).c_str());
    os << buf;
  }
}

}  // namespace qsep::verify
