#pragma once

#include "stokesdd/assembly.hpp"
#include "stokesdd/mesh.hpp"
#include "stokesdd/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace stokesdd {

enum class OutputFormat { Csv, Markdown, Json };

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);     // csv | md | json
CoarseSpace parse_coarse(const std::string& s);      // corners | corners-edges
PressureKind parse_pressure(const std::string& s);   // continuous | discontinuous

struct CaseConfig {
  int nsub = 4;   // subdomains per side
  int ratio = 8;  // pressure cells per subdomain side (H/h)
  CoarseSpace coarse = CoarseSpace::CornersOnly;
  PressureKind pressure = PressureKind::Continuous;
  double tol = 1e-6;
  int maxit = 500;
  int threads = 0;    // 0: environment default
  unsigned seed = 0;  // echoed; consumed by randomized property checks only
  OutputFormat format = OutputFormat::Markdown;
  std::string dump_dir;      // optional: mesh/partition/matrix dumps
  std::string residual_log;  // optional: per-iteration CSV
};

struct ErrorNorms {
  double velocity_l2 = 0.0;
  double velocity_h1 = 0.0;  // seminorm
  double pressure_l2 = 0.0;  // after mean alignment
};

/// Quadrature-evaluated discretization errors of a discrete solution against
/// the closed-form solution the load was manufactured from. The velocity is
/// passed in free-DOF numbering; boundary nodes are zero by construction.
ErrorNorms error_norms(const MixedSystem& system, const MeshPair& meshes, const Vec& u_free,
                       const Vec& p);

struct CaseReport {
  CaseConfig config;
  int iterations = 0;
  bool converged = false;
  double lambda_min = 0.0;  // Ritz estimates from the CG scalars
  double lambda_max = 0.0;
  ErrorNorms errors;
  double assembly_seconds = 0.0;
  double factorization_seconds = 0.0;
  double cg_seconds = 0.0;
  int n_interface_pressure = 0;
  int n_lambda = 0;
  int n_primal = 0;

  std::string to_json() const;
  static CaseReport from_json(const std::string& text);
  static std::string csv_header();
  std::string csv_row() const;
};

/// Full pipeline: mesh, assembly, partition, block reduction, factorization,
/// CG on the interface system, back-substitution, error norms. Deterministic
/// for a fixed config. Errors carry the failing phase in their message.
CaseReport run_case(const CaseConfig& config);

void print_report(std::ostream& out, const CaseReport& report, OutputFormat format);

// Published reference values.

// One published row. The published H/h column counts fine (velocity) mesh
// cells per subdomain side; the solver config counts pressure cells, half as
// many, so hh_label == 2 * ratio throughout.
struct TableEntry {
  int block;  // 0: H/h = 8 fixed, nsub varies; 1: nsub = 8 fixed, H/h varies
  int nsub;
  int ratio;     // pressure cells per subdomain side (CaseConfig::ratio)
  int hh_label;  // published H/h value for this row
  double lambda_min;
  double lambda_max;
  int iterations;
};

struct ReferenceTable {
  int id = 0;
  CoarseSpace coarse = CoarseSpace::CornersOnly;
  PressureKind pressure = PressureKind::Continuous;
  std::vector<TableEntry> rows;  // 10 per table
};

const std::vector<ReferenceTable>& reference_tables();

// Comparison tolerances: eigenvalue estimates relative, iterations absolute.
inline constexpr double kEigenRelTol = 0.10;
inline constexpr int kIterAbsTol = 3;

struct RowComparison {
  TableEntry expected;
  CaseReport computed;
  bool ran = false;
  std::string error;  // failure text when the case threw

  double lambda_min_dev() const;  // |computed - expected| / expected
  double lambda_max_dev() const;
  int iteration_diff() const;
  bool pass() const;
};

struct TableComparison {
  int table_id = 0;
  CoarseSpace coarse = CoarseSpace::CornersOnly;
  PressureKind pressure = PressureKind::Continuous;
  std::vector<RowComparison> rows;

  bool all_pass() const;
};

/// Runs the 10 configurations of one published table and compares eigenvalue
/// estimates and iteration counts against the reference values. Per-case
/// failures are recorded and the run continues.
TableComparison run_table(int table_id, double tol = 1e-6, int maxit = 500, int threads = 0);

void print_table_comparison(std::ostream& out, const TableComparison& cmp, OutputFormat format);

} // namespace stokesdd
