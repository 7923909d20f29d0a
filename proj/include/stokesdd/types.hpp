#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesdd {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class CoarseSpace { CornersOnly, CornersEdges };
enum class PressureKind { Continuous, Discontinuous };

std::string to_string(CoarseSpace c);
std::string to_string(PressureKind p);

/// Max-norm relative asymmetry; 0 for an exactly symmetric matrix.
double relative_asymmetry(const SpMat& m);

/// Runs fn(i) for i in [0, n). With threads <= 1 this is a plain loop.
/// Work is split into contiguous chunks so results written to disjoint
/// slots are deterministic regardless of thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Thread count resolution: flag value if > 0, else STOKESDD_THREADS, else 1.
int resolve_threads(int flag_value);

/// MatrixMarket coordinate export (general, real).
void write_matrix_market(const SpMat& m, const std::string& path);
void write_matrix_market_dense(const Mat& m, const std::string& path);

} // namespace stokesdd
