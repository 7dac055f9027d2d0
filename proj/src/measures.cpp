#include "shiftlab/measures.hpp"

#include <sstream>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {

void validate(const Measure& m) {
  std::visit(
      [](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          for (const auto& [loc, mass] : mm.atoms) {
            if (loc < Rational(0) || loc > Rational(1))
              throw DomainError("atom locations must lie in [0,1]");
            if (mass.sgn() <= 0) throw DomainError("atom masses must be positive");
          }
        } else if constexpr (std::is_same_v<T, LogPowerMeasure>) {
          if (mm.q.sgn() <= 0) throw DomainError("log_power requires q > 0");
        }
      },
      m);
}

}  // namespace

Measure measure_from_json(const nlohmann::json& j) {
  auto rat = [](const nlohmann::json& v, const char* where) -> Rational {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return Rational::from_string(v.get<std::string>());
    throw ParseError("expected a rational", where);
  };
  if (!j.is_object()) throw ParseError("measure spec must be an object", j.dump());
  if (j.contains("atomic")) {
    AtomicMeasure m;
    for (const auto& pair : j.at("atomic")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("atomic entries are [location, mass] pairs", j.dump());
      m.atoms.emplace_back(rat(pair[0], "atomic.location"), rat(pair[1], "atomic.mass"));
    }
    validate(m);
    return m;
  }
  if (j.contains("poly_density")) {
    PolyDensityMeasure m;
    for (const auto& c : j.at("poly_density"))
      m.coeffs.push_back(rat(c, "poly_density.coeff"));
    return m;
  }
  if (j.contains("log_power")) {
    LogPowerMeasure m{rat(j.at("log_power").at("q"), "log_power.q")};
    validate(m);
    return m;
  }
  throw ParseError("measure spec needs \"atomic\", \"poly_density\" or \"log_power\"",
                   j.dump());
}

nlohmann::json measure_to_json(const Measure& m) {
  return std::visit(
      [](const auto& mm) -> nlohmann::json {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          nlohmann::json atoms = nlohmann::json::array();
          for (const auto& [loc, mass] : mm.atoms)
            atoms.push_back({loc.to_string(), mass.to_string()});
          return {{"atomic", atoms}};
        } else if constexpr (std::is_same_v<T, PolyDensityMeasure>) {
          nlohmann::json cs = nlohmann::json::array();
          for (const auto& c : mm.coeffs) cs.push_back(c.to_string());
          return {{"poly_density", cs}};
        } else {
          return {{"log_power", {{"q", mm.q.to_string()}}}};
        }
      },
      m);
}

std::string describe(const Measure& m) {
  std::ostringstream os;
  std::visit(
      [&](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          os << "atomic{";
          for (size_t i = 0; i < mm.atoms.size(); ++i)
            os << (i ? ", " : "") << mm.atoms[i].second << "*delta_"
               << mm.atoms[i].first;
          os << "}";
        } else if constexpr (std::is_same_v<T, PolyDensityMeasure>) {
          os << "poly_density[";
          for (size_t i = 0; i < mm.coeffs.size(); ++i)
            os << (i ? "," : "") << mm.coeffs[i];
          os << "]";
        } else {
          os << "log_power(q=" << mm.q << ")";
        }
      },
      m);
  return os.str();
}

Rational lk_sequence(const LevyKhintchinTriple& t, long n, long index_offset) {
  if (n < 0) throw DomainError("lk_sequence index must be nonnegative");
  validate(t.mu);
  const long m = n + index_offset;  // integrand exponent
  Rational out = t.a + t.b * Rational(n);
  if (m == 0) return out;  // t^0 = 1 for every t, the integral vanishes
  return std::visit(
      [&](const auto& mu) -> Rational {
        using T = std::decay_t<decltype(mu)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          Rational acc(0);
          for (const auto& [loc, mass] : mu.atoms)
            acc += mass * (Rational(1) - loc.pow(m));
          return out + acc;
        } else if constexpr (std::is_same_v<T, PolyDensityMeasure>) {
          // integral of (1 - t^m) t^j over [0,1] = 1/(j+1) - 1/(m+j+1)
          Rational acc(0);
          for (size_t j = 0; j < mu.coeffs.size(); ++j) {
            const long jj = static_cast<long>(j);
            acc += mu.coeffs[j] *
                   (Rational(1, jj + 1) - Rational(1, m + jj + 1));
          }
          return out + acc;
        } else {
          throw DomainError(
              "lk_sequence does not support the log_power kind; it is a "
              "Berger measure only");
        }
      },
      t.mu);
}

LevyKhintchinTriple agler_lk_triple(long j) {
  if (j < 2) throw DomainError("agler_lk_triple requires j >= 2");
  PolyDensityMeasure density;
  density.coeffs.assign(j, Rational(0));
  density.coeffs[j - 1] = Rational(j - 1);  // (j-1) t^{j-1}
  return LevyKhintchinTriple{Rational(1, j), Rational(0), density};
}

Value berger_moment(const Measure& m, long n, const EvalOptions& opt) {
  if (n < 0) throw DomainError("berger_moment index must be nonnegative");
  validate(m);
  return std::visit(
      [&](const auto& mu) -> Value {
        using T = std::decay_t<decltype(mu)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          Rational acc(0);
          for (const auto& [loc, mass] : mu.atoms)
            acc += mass * (n == 0 ? Rational(1) : loc.pow(n));
          return acc;
        } else if constexpr (std::is_same_v<T, PolyDensityMeasure>) {
          Rational acc(0);
          for (size_t j = 0; j < mu.coeffs.size(); ++j)
            acc += mu.coeffs[j] *
                   Rational(1, n + static_cast<long>(j) + 1);
          return acc;
        } else {
          // Gamma-integral identity: the moments are (n+1)^{-q}
          if (mu.q.is_integer() && mu.q.numerator().fits_slong_p())
            return Rational(n + 1).pow(mu.q.numerator().get_si()).reciprocal();
          return Interval::from_rational(Rational(n + 1), opt.start_bits)
              .pow_rational(-mu.q);
        }
      },
      m);
}

Verdict moment_match_verdict(const SequenceDef& weights, const Measure& m,
                             long N, long tolerance_bits, const EvalOptions& opt) {
  if (N < 0) throw DomainError("moment match requires N >= 0");
  validate(m);
  MomentSequence gamma(weights);
  Verdict v;
  v.tested_order = 0;
  v.tested_window = N;
  std::vector<std::pair<long, long>> undecided;
  for (long n = 0; n <= N; ++n) {
    const Value bm = berger_moment(m, n, opt);
    const auto ge = gamma.exact(n);
    if (ge && std::holds_alternative<Rational>(bm)) {
      if (*ge != std::get<Rational>(bm)) {
        v.status = Verdict::Status::Fail;
        Witness w;
        w.n = n;
        w.k = 0;
        w.value = "gamma_n = " + ge->to_string() +
                  " vs measure moment " + std::get<Rational>(bm).to_string();
        w.sign = (*ge - std::get<Rational>(bm)).sign();
        v.witness = w;
        return v;
      }
      continue;
    }
    // interval comparison: escalate until both widths are below the
    // tolerance, then disjointness decides a mismatch
    bool decided = false;
    for (long bits = std::max(opt.start_bits, tolerance_bits); bits <= opt.max_bits;
         bits *= 2) {
      try {
        Interval g = ge ? Interval::from_rational(*ge, bits) : gamma.enclosure(n, bits);
        Interval b = std::holds_alternative<Rational>(bm)
                         ? Interval::from_rational(std::get<Rational>(bm), bits)
                         : Interval::from_rational(Rational(n + 1), bits)
                               .pow_rational(-std::get<LogPowerMeasure>(m).q);
        const Sign diff = (g - b).sign();
        if (diff == Sign::Positive || diff == Sign::Negative) {
          v.status = Verdict::Status::Fail;
          Witness w;
          w.n = n;
          w.k = 0;
          w.value = "moments differ by " + ((g - b).to_decimal_strings().first);
          w.sign = diff;
          v.witness = w;
          return v;
        }
        if (g.width_below(tolerance_bits) && b.width_below(tolerance_bits)) {
          decided = true;  // overlapping at tolerance
          break;
        }
      } catch (const PrecisionLoss&) {
      }
    }
    if (!decided) undecided.emplace_back(0, n);
  }
  if (!undecided.empty()) {
    v.status = Verdict::Status::Undecided;
    v.undecided_cells = std::move(undecided);
    return v;
  }
  v.status = Verdict::Status::Pass;
  return v;
}

}  // namespace shiftlab
