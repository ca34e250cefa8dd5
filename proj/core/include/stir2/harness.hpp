#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stir2/expansions.hpp"
#include "stir2/real.hpp"

namespace stir2 {

enum class OutputFormat { csv, json };

/// One approximation to evaluate per sweep cell.
struct FamilySpec {
  Family family = Family::EE;
  int order = 1;
  bool error_reduced = false;
  mpq_class alpha = 0;  // EE only
  long saddle_m = 3;    // SADDLE_MLOGN / SADDLE_RHO truncation

  std::string label() const;
  // parses "FD", "EE_R", "EE@1", "SADDLE_RHO", ... (order set separately)
  static FamilySpec parse(const std::string& token);
};

struct RunConfig {
  int digits = Real::kDefaultDigits;
  std::vector<FamilySpec> families;
  std::vector<long> n_values;
  bool has_k_range = false;
  long k_lo = 0, k_hi = 0;
  double sd_window = -1.0;  // >= 0: k spans mean+offset +- window*sigma
  OutputFormat format = OutputFormat::csv;
  std::string out_path;      // empty = stdout
  double axis_offset = -1.0;
  int out_digits = 20;

  void validate() const;
};

struct CompareRow {
  long n = 0, k = 0;
  std::string x_axis;
  std::string family;
  int order = 0;
  std::string approx;  // "error:<tag>" when the cell's solver failed
  std::string exact;
  std::string delta;   // empty on failed cells
  bool in_range = false;
};

/// Evaluate one approximation cell (never throws for per-cell solver
/// failures; those are encoded in the row).
ApproxResult evaluate_family(long n, long k, const FamilySpec& spec, int digits);

/// Error-comparison table over explicit n values and a k range; one row per
/// (n, k, family), ordered by (n, k, family label).
std::vector<CompareRow> compare_run(const RunConfig& cfg);

/// Same, with k spanning round(mu+offset) +- window*sigma per n and the
/// figure-convention x axis (mean at 1, one sigma per 0.1).
std::vector<CompareRow> sweep_sd_axis(const RunConfig& cfg);

/// Smallest n with coverage probability > 1/2 (monotone search). The
/// approximate path solves (1-(1-s/k)^n)^k = 1/2 in closed form.
long lotto_threshold(long k, long s, bool use_exact, int digits = Real::kDefaultDigits);
Real lotto_approx_root(long k, long s, int digits = Real::kDefaultDigits);

void emit(const std::vector<CompareRow>& rows, OutputFormat format, std::ostream& out);
void emit_to_path(const std::vector<CompareRow>& rows, OutputFormat format,
                  const std::string& path);

}  // namespace stir2
