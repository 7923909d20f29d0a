#include "stokesdd/types.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace stokesdd {

std::string to_string(CoarseSpace c) {
  return c == CoarseSpace::CornersOnly ? "corners" : "corners-edges";
}

std::string to_string(PressureKind p) {
  return p == PressureKind::Continuous ? "continuous" : "discontinuous";
}

double relative_asymmetry(const SpMat& m) {
  SpMat diff = SpMat(m.transpose()) - m;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SpMat::InnerIterator it(diff, k); it; ++it) {
      num = std::max(num, std::abs(it.value()));
    }
  }
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      den = std::max(den, std::abs(it.value()));
    }
  }
  return den > 0 ? num / den : 0.0;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("STOKESDD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void write_matrix_market(const SpMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("matrix market: cannot open " + path);
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
    }
  }
}

void write_matrix_market_dense(const Mat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("matrix market: cannot open " + path);
  out.precision(17);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out << m(i, j) << "\n";
    }
  }
}

} // namespace stokesdd
