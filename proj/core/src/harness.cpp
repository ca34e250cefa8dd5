#include "stir2/harness.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "stir2/errors.hpp"
#include "stir2/exact.hpp"
#include "stir2/stats.hpp"

namespace stir2 {

std::string FamilySpec::label() const {
  std::string s = family_name(family);
  if (family == Family::EE && alpha != 0) s += "@" + alpha.get_str();
  if (error_reduced) s += "_R";
  return s;
}

FamilySpec FamilySpec::parse(const std::string& token) {
  FamilySpec spec;
  std::string t = token;
  if (t.size() > 2 && t.substr(t.size() - 2) == "_R") {
    spec.error_reduced = true;
    t = t.substr(0, t.size() - 2);
  }
  auto at = t.find('@');
  if (at != std::string::npos) {
    std::string a = t.substr(at + 1);
    t = t.substr(0, at);
    try {
      spec.alpha = mpq_class(a);
      spec.alpha.canonicalize();
    } catch (...) {
      throw DomainError("unparseable alpha in family token: " + token);
    }
  }
  if (t == "FD") spec.family = Family::FD;
  else if (t == "PC") spec.family = Family::PC;
  else if (t == "BB") spec.family = Family::BB;
  else if (t == "BE") spec.family = Family::BE;
  else if (t == "EE") spec.family = Family::EE;
  else if (t == "EB") spec.family = Family::EB;
  else if (t == "MENON") spec.family = Family::MENON;
  else if (t == "SADDLE_SMALLK") spec.family = Family::SADDLE_SMALLK;
  else if (t == "SADDLE_MLOGN") spec.family = Family::SADDLE_MLOGN;
  else if (t == "SADDLE_RHO") spec.family = Family::SADDLE_RHO;
  else throw DomainError("unknown family token: " + token);
  if (spec.family != Family::EE && spec.alpha != 0)
    throw DomainError("alpha applies to the EE family only: " + token);
  bool reducible = spec.family == Family::BB || spec.family == Family::BE ||
                   spec.family == Family::EE || spec.family == Family::EB ||
                   spec.family == Family::MENON;
  if (spec.error_reduced && !reducible)
    throw DomainError("family has no error-reduced variant: " + token);
  return spec;
}

void RunConfig::validate() const {
  if (families.empty()) throw DomainError("config: at least one family is required");
  if (digits < Real::kMinDigits) throw DomainError("config: precision must be >= 15 digits");
  if (n_values.empty()) throw DomainError("config: at least one n is required");
  for (long n : n_values)
    if (n < 1) throw DomainError("config: n values must be >= 1");
  if (has_k_range && (k_lo < 1 || k_hi < k_lo)) throw DomainError("config: bad k range");
  if (out_digits < 2) throw DomainError("config: output precision must be >= 2 digits");
}

ApproxResult evaluate_family(long n, long k, const FamilySpec& spec, int digits) {
  switch (spec.family) {
    case Family::FD: return fd_expansion(n, k, spec.order, digits);
    case Family::PC: return pc_expansion(n, k, spec.order, digits);
    case Family::BB:
      return family_expansion(n, k, FamilyKind::bb, spec.order, spec.error_reduced, digits);
    case Family::BE:
      return family_expansion(n, k, FamilyKind::be, spec.order, spec.error_reduced, digits);
    case Family::EE:
      return family_expansion(n, k, FamilyKind::ee, spec.order, spec.error_reduced, digits,
                              spec.alpha);
    case Family::EB:
      return family_expansion(n, k, FamilyKind::eb, spec.order, spec.error_reduced, digits);
    case Family::MENON:
      return spec.error_reduced ? menon_reduced(n, k, digits) : menon_expansion(n, k, digits);
    case Family::SADDLE_SMALLK:
      return saddle_corollary(n, k, 0, SaddleForm::small_k, digits);
    case Family::SADDLE_MLOGN:
      return saddle_corollary(n, k, spec.saddle_m, SaddleForm::m_logn, digits);
    case Family::SADDLE_RHO:
      return saddle_corollary(n, k, spec.saddle_m, SaddleForm::rho_form, digits);
  }
  throw DomainError("evaluate_family: unknown family");
}

namespace {

std::string x_axis_string(long k, const MomentParams& mp, double offset, int out_digits) {
  const mpfr_prec_t work = mp.mu.prec() + 16;
  Real sigma = sqrt(mp.sigma2.round_to(work));
  Real x = 1 + (Real::of(k).round_to(work) - mp.mu.round_to(work) -
                Real::of(offset).round_to(work)) /
                   (10 * sigma);
  return x.str(out_digits);
}

std::vector<CompareRow> run_cells(const RunConfig& cfg,
                                  const std::vector<std::pair<long, std::pair<long, long>>>& grids) {
  std::vector<CompareRow> rows;
  for (const auto& [n, krange] : grids) {
    MomentParams mp = moment_params(n, cfg.digits);
    for (long k = krange.first; k <= krange.second; ++k) {
      Rat s_exact = normalized_s(n, k);
      Real s_real = Real::of(s_exact, cfg.digits + 10);
      std::string exact_str = s_real.str(cfg.out_digits);
      std::string x_str = x_axis_string(k, mp, cfg.axis_offset, cfg.out_digits);
      for (const auto& spec : cfg.families) {
        CompareRow row;
        row.n = n;
        row.k = k;
        row.x_axis = x_str;
        row.family = spec.label();
        row.order = spec.order;
        row.exact = exact_str;
        try {
          ApproxResult res = evaluate_family(n, k, spec, cfg.digits);
          row.approx = res.value.str(cfg.out_digits);
          Real delta = abs(s_real / res.value - 1);
          row.delta = delta.str(cfg.out_digits);
          row.in_range = res.in_validity_range;
        } catch (const DomainError&) {
          row.approx = "error:domain";
          row.in_range = false;
        } catch (const ConvergenceError&) {
          row.approx = "error:non-convergence";
          row.in_range = false;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.k != b.k) return a.k < b.k;
    return a.family < b.family;
  });
  return rows;
}

std::pair<long, long> sd_grid(long n, double window, double offset, int digits) {
  MomentParams mp = moment_params(n, digits);
  const mpfr_prec_t work = mp.mu.prec();
  Real sigma = sqrt(mp.sigma2.round_to(work));
  Real center = mp.mu.round_to(work) + Real::of(offset).round_to(work);
  Real w = Real::of(window).round_to(work);
  long lo = (center - w * sigma).to_long();
  long hi = (center + w * sigma).to_long();
  lo = std::max(1L, std::min(lo, n));
  hi = std::max(1L, std::min(hi, n));
  if (hi < lo) std::swap(lo, hi);
  return {lo, hi};
}

}  // namespace

std::vector<CompareRow> compare_run(const RunConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<long, std::pair<long, long>>> grids;
  for (long n : cfg.n_values) {
    if (cfg.has_k_range) {
      long lo = std::max(1L, cfg.k_lo);
      long hi = std::min(n, cfg.k_hi);
      if (hi >= lo) grids.push_back({n, {lo, hi}});
    } else {
      double window = cfg.sd_window >= 0 ? cfg.sd_window : 4.0;
      grids.push_back({n, sd_grid(n, window, cfg.axis_offset, cfg.digits)});
    }
  }
  return run_cells(cfg, grids);
}

std::vector<CompareRow> sweep_sd_axis(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.sd_window < 0) throw DomainError("sweep: sd-window is required");
  std::vector<std::pair<long, std::pair<long, long>>> grids;
  for (long n : cfg.n_values)
    grids.push_back({n, sd_grid(n, cfg.sd_window, cfg.axis_offset, cfg.digits)});
  return run_cells(cfg, grids);
}

long lotto_threshold(long k, long s, bool use_exact, int digits) {
  if (s < 1 || s > k) throw DomainError("lotto_threshold: requires 1 <= s <= k");
  if (use_exact) {
    Rat half(1, 2);
    auto above = [&](long n) { return coupon_covered(n, k, s) > half; };
    long hi = 1;
    while (!above(hi)) hi *= 2;
    long lo = hi / 2;  // above(lo) is false (or lo == 0)
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      if (above(mid))
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }
  Real root = lotto_approx_root(k, s, digits);
  long fl = root.floor_long();
  return fl + 1;
}

Real lotto_approx_root(long k, long s, int digits) {
  if (s < 1 || s > k) throw DomainError("lotto_approx_root: requires 1 <= s <= k");
  const mpfr_prec_t work = Real::bits_for(digits) + 16;
  // (1-(1-s/k)^n)^k = 1/2  =>  n = log(1 - 2^{-1/k}) / log(1 - s/k)
  Real half_pow = exp(log(Real::of(mpq_class(1, 2)).round_to(work)) / k);
  Real num = log1p(-half_pow);
  Real den = log(Real::of(mpq_class(k - s, k)).round_to(work));
  return (num / den).round_to(Real::bits_for(digits));
}

namespace {

const char* kCsvHeader = "n,k,x_axis,family,order,approx,exact,delta,in_range\n";

}  // namespace

void emit(const std::vector<CompareRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::csv) {
    out << kCsvHeader;
    for (const auto& r : rows) {
      out << r.n << ',' << r.k << ',' << r.x_axis << ',' << r.family << ',' << r.order << ','
          << r.approx << ',' << r.exact << ',' << r.delta << ',' << (r.in_range ? 1 : 0)
          << '\n';
    }
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    obj["n"] = r.n;
    obj["k"] = r.k;
    obj["x_axis"] = r.x_axis;
    obj["family"] = r.family;
    obj["order"] = r.order;
    obj["approx"] = r.approx;
    obj["exact"] = r.exact;
    obj["delta"] = r.delta;
    obj["in_range"] = r.in_range;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

void emit_to_path(const std::vector<CompareRow>& rows, OutputFormat format,
                  const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output path: " + path);
  emit(rows, format, f);
  f.flush();
  if (!f) throw IoError("write failure on output path: " + path);
}

}  // namespace stir2
