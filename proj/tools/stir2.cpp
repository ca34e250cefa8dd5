// Command-line surface for the Stirling-number toolkit: exact values,
// asymptotic approximations, error-comparison sweeps, lottery thresholds,
// and limit-theorem reports, as CSV or JSON.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stir2/errors.hpp"
#include "stir2/exact.hpp"
#include "stir2/expansions.hpp"
#include "stir2/harness.hpp"
#include "stir2/params.hpp"
#include "stir2/stats.hpp"

namespace {

using nlohmann::ordered_json;

struct GlobalOpts {
  int digits = stir2::Real::kDefaultDigits;
  std::string format = "csv";
  std::string out_path;
  double axis_offset = -1.0;
  int out_digits = 20;
};

stir2::OutputFormat parse_format(const std::string& f) {
  if (f == "csv") return stir2::OutputFormat::csv;
  if (f == "json") return stir2::OutputFormat::json;
  throw stir2::DomainError("unknown output format: " + f);
}

// generic single-record output: CSV = header row + value row, JSON = object
void emit_record(const GlobalOpts& g, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!g.out_path.empty()) {
    file.open(g.out_path, std::ios::binary);
    if (!file) throw stir2::IoError("cannot open output path: " + g.out_path);
    out = &file;
  }
  if (parse_format(g.format) == stir2::OutputFormat::csv) {
    for (size_t i = 0; i < kv.size(); ++i) *out << kv[i].first << (i + 1 < kv.size() ? "," : "");
    *out << '\n';
    for (size_t i = 0; i < kv.size(); ++i) *out << kv[i].second << (i + 1 < kv.size() ? "," : "");
    *out << '\n';
  } else {
    ordered_json obj;
    for (const auto& [k, v] : kv) obj[k] = v;
    *out << obj.dump(2) << '\n';
  }
  out->flush();
  if (!*out) throw stir2::IoError("write failure");
}

void emit_rows(const GlobalOpts& g, const std::vector<stir2::CompareRow>& rows) {
  if (g.out_path.empty()) {
    stir2::emit(rows, parse_format(g.format), std::cout);
  } else {
    stir2::emit_to_path(rows, parse_format(g.format), g.out_path);
  }
}

std::vector<stir2::FamilySpec> build_specs(const std::vector<std::string>& families,
                                           const std::vector<int>& orders, long saddle_m) {
  if (families.empty()) throw stir2::DomainError("at least one family is required");
  if (orders.size() > 1 && orders.size() != families.size())
    throw stir2::DomainError("--orders must have one entry or one per family");
  std::vector<stir2::FamilySpec> specs;
  for (size_t i = 0; i < families.size(); ++i) {
    stir2::FamilySpec spec = stir2::FamilySpec::parse(families[i]);
    spec.order = orders.empty() ? 1 : (orders.size() == 1 ? orders[0] : orders[i]);
    spec.saddle_m = saddle_m;
    specs.push_back(spec);
  }
  return specs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stirling numbers of the second kind: exact values and central-range asymptotics"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--digits", g.digits, "working precision, decimal digits (>= 15)")
      ->check(CLI::Range(15, 100000));
  app.add_option("--format", g.format, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out_path, "output path (default: stdout)");
  app.add_option("--axis-offset", g.axis_offset, "x-axis centering offset (default -1)");
  app.add_option("--out-digits", g.out_digits, "significant digits in output columns")
      ->check(CLI::Range(2, 1000));

  // exact n k
  long ex_n = 0, ex_k = 0;
  auto* cmd_exact = app.add_subcommand("exact", "exact Stirling{n}{k} and S(n,k)");
  cmd_exact->add_option("n", ex_n)->required();
  cmd_exact->add_option("k", ex_k)->required();

  // bell n_max
  long bell_nmax = 0;
  auto* cmd_bell = app.add_subcommand("bell", "Bell numbers B_0..B_nmax");
  cmd_bell->add_option("n_max", bell_nmax)->required();

  // approx n k --family F --order s [--error-reduced] [--alpha A] [--saddle-m M]
  long ap_n = 0, ap_k = 0, ap_saddle_m = 3;
  std::string ap_family = "EE";
  int ap_order = 1;
  bool ap_reduced = false;
  std::string ap_alpha = "0";
  auto* cmd_approx = app.add_subcommand("approx", "one asymptotic approximation at (n, k)");
  cmd_approx->add_option("n", ap_n)->required();
  cmd_approx->add_option("k", ap_k)->required();
  cmd_approx->add_option("--family", ap_family, "FD|PC|BB|BE|EE|EB|MENON|SADDLE_*");
  cmd_approx->add_option("--order", ap_order);
  cmd_approx->add_flag("--error-reduced", ap_reduced);
  cmd_approx->add_option("--alpha", ap_alpha, "EE exponent shift (exact rational or decimal)");
  cmd_approx->add_option("--saddle-m", ap_saddle_m);

  // compare --n LIST --families LIST --orders LIST [--k-lo --k-hi | --sd-window W]
  std::vector<long> cp_n;
  std::vector<std::string> cp_families;
  std::vector<int> cp_orders;
  long cp_klo = 0, cp_khi = 0, cp_saddle_m = 3;
  double cp_window = -1.0;
  auto* cmd_compare = app.add_subcommand("compare", "error-comparison table over (n, k, family)");
  cmd_compare->add_option("--n", cp_n)->required()->delimiter(',');
  cmd_compare->add_option("--families", cp_families)->required()->delimiter(',');
  cmd_compare->add_option("--orders", cp_orders)->delimiter(',');
  cmd_compare->add_option("--k-lo", cp_klo);
  cmd_compare->add_option("--k-hi", cp_khi);
  cmd_compare->add_option("--sd-window", cp_window);
  cmd_compare->add_option("--saddle-m", cp_saddle_m);

  // sweep --n N --sd-window W --families LIST --orders LIST
  long sw_n = 0, sw_saddle_m = 3;
  double sw_window = 2.0;
  std::vector<std::string> sw_families;
  std::vector<int> sw_orders;
  auto* cmd_sweep = app.add_subcommand("sweep", "sd-window sweep with the figure x-axis");
  cmd_sweep->add_option("--n", sw_n)->required();
  cmd_sweep->add_option("--sd-window", sw_window)->required();
  cmd_sweep->add_option("--families", sw_families)->required()->delimiter(',');
  cmd_sweep->add_option("--orders", sw_orders)->delimiter(',');
  cmd_sweep->add_option("--saddle-m", sw_saddle_m);

  // moments n [--refined]
  long mo_n = 0;
  bool mo_refined = false;
  auto* cmd_moments = app.add_subcommand("moments", "asymptotic mean/variance of the block count");
  cmd_moments->add_option("n", mo_n)->required();
  cmd_moments->add_flag("--refined", mo_refined);

  // limits n
  long li_n = 0;
  auto* cmd_limits = app.add_subcommand("limits", "CLT/LLT report against the exact distribution");
  cmd_limits->add_option("n", li_n)->required();

  // lotto k s [--approx]
  long lo_k = 0, lo_s = 0;
  bool lo_approx = false;
  auto* cmd_lotto = app.add_subcommand("lotto", "smallest n with coverage probability > 1/2");
  cmd_lotto->add_option("k", lo_k)->required();
  cmd_lotto->add_option("s", lo_s)->required();
  cmd_lotto->add_flag("--approx", lo_approx);

  // saddle n k
  long sa_n = 0, sa_k = 0;
  auto* cmd_saddle = app.add_subcommand("saddle", "saddle-point solution R for (n, k)");
  cmd_saddle->add_option("n", sa_n)->required();
  cmd_saddle->add_option("k", sa_k)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_exact) {
      stir2::Rat s = stir2::normalized_s(ex_n, ex_k);
      stir2::Real sd = stir2::Real::of(s, g.digits + 10);
      emit_record(g, {{"n", std::to_string(ex_n)},
                      {"k", std::to_string(ex_k)},
                      {"stirling", stir2::stirling2(ex_n, ex_k).get_str()},
                      {"s_rational", s.get_num().get_str() + "/" + s.get_den().get_str()},
                      {"s_decimal", sd.str(g.out_digits)}});
    } else if (*cmd_bell) {
      auto bells = stir2::bell_numbers(bell_nmax);
      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!g.out_path.empty()) {
        file.open(g.out_path, std::ios::binary);
        if (!file) throw stir2::IoError("cannot open output path: " + g.out_path);
        out = &file;
      }
      if (parse_format(g.format) == stir2::OutputFormat::csv) {
        *out << "n,bell\n";
        for (size_t i = 0; i < bells.size(); ++i) *out << i << ',' << bells[i].get_str() << '\n';
      } else {
        ordered_json arr = ordered_json::array();
        for (size_t i = 0; i < bells.size(); ++i)
          arr.push_back({{"n", i}, {"bell", bells[i].get_str()}});
        *out << arr.dump(2) << '\n';
      }
      out->flush();
      if (!*out) throw stir2::IoError("write failure");
    } else if (*cmd_approx) {
      stir2::FamilySpec spec = stir2::FamilySpec::parse(ap_family);
      spec.order = ap_order;
      spec.error_reduced = spec.error_reduced || ap_reduced;
      spec.saddle_m = ap_saddle_m;
      if (ap_alpha != "0") {
        spec.alpha = stir2::Real::parse(ap_alpha, g.digits).to_rational_exact();
      }
      stir2::RunConfig cfg;
      cfg.digits = g.digits;
      cfg.families = {spec};
      cfg.n_values = {ap_n};
      cfg.has_k_range = true;
      cfg.k_lo = cfg.k_hi = ap_k;
      cfg.format = parse_format(g.format);
      cfg.axis_offset = g.axis_offset;
      cfg.out_digits = g.out_digits;
      emit_rows(g, stir2::compare_run(cfg));
    } else if (*cmd_compare) {
      stir2::RunConfig cfg;
      cfg.digits = g.digits;
      cfg.families = build_specs(cp_families, cp_orders, cp_saddle_m);
      cfg.n_values = cp_n;
      if (cp_klo > 0 || cp_khi > 0) {
        cfg.has_k_range = true;
        cfg.k_lo = cp_klo;
        cfg.k_hi = cp_khi;
      }
      cfg.sd_window = cp_window;
      cfg.format = parse_format(g.format);
      cfg.axis_offset = g.axis_offset;
      cfg.out_digits = g.out_digits;
      emit_rows(g, stir2::compare_run(cfg));
    } else if (*cmd_sweep) {
      stir2::RunConfig cfg;
      cfg.digits = g.digits;
      cfg.families = build_specs(sw_families, sw_orders, sw_saddle_m);
      cfg.n_values = {sw_n};
      cfg.sd_window = sw_window;
      cfg.format = parse_format(g.format);
      cfg.axis_offset = g.axis_offset;
      cfg.out_digits = g.out_digits;
      emit_rows(g, stir2::sweep_sd_axis(cfg));
    } else if (*cmd_moments) {
      auto [mean, var] = stir2::mean_var_asympt(mo_n, mo_refined, g.digits);
      stir2::MomentParams mp = stir2::moment_params(mo_n, g.digits);
      emit_record(g, {{"n", std::to_string(mo_n)},
                      {"refined", mo_refined ? "1" : "0"},
                      {"mean", mean.str(g.out_digits)},
                      {"variance", var.str(g.out_digits)},
                      {"omega", mp.omega.str(g.out_digits)}});
    } else if (*cmd_limits) {
      stir2::LimitReport rep = stir2::limit_checks(li_n, g.digits);
      std::vector<std::pair<std::string, std::string>> kv = {
          {"n", std::to_string(li_n)},
          {"sup_cdf_distance", rep.sup_cdf_distance.str(g.out_digits)},
          {"scaled_rate", rep.scaled_rate.str(g.out_digits)}};
      for (const auto& [x, ratio] : rep.llt_ratios)
        kv.emplace_back("llt_ratio_x" + std::to_string(x.to_long()), ratio.str(g.out_digits));
      emit_record(g, kv);
    } else if (*cmd_lotto) {
      long threshold = stir2::lotto_threshold(lo_k, lo_s, !lo_approx, g.digits);
      std::vector<std::pair<std::string, std::string>> kv = {
          {"k", std::to_string(lo_k)},
          {"s", std::to_string(lo_s)},
          {"path", lo_approx ? "approx" : "exact"},
          {"threshold", std::to_string(threshold)}};
      if (lo_approx)
        kv.emplace_back("root", stir2::lotto_approx_root(lo_k, lo_s, g.digits).str(g.out_digits));
      emit_record(g, kv);
    } else if (*cmd_saddle) {
      stir2::SaddleSolution sol =
          stir2::solve_saddle(sa_n, sa_k, stir2::SolverConfig::for_digits(g.digits), g.digits);
      emit_record(g, {{"n", std::to_string(sa_n)},
                      {"k", std::to_string(sa_k)},
                      {"R", sol.R.str(g.out_digits)},
                      {"V", sol.V.str(g.out_digits)},
                      {"residual", sol.residual.str(g.out_digits)}});
    }
  } catch (const stir2::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const stir2::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const stir2::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const stir2::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
