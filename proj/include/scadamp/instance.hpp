#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace scadamp {

// One compression instance: y in R^M i.i.d. N(0, sigma_y^2), A an M x N
// matrix with i.i.d. N(0, 1/M) entries, M < N.  The undersampling ratio is
// alpha = M/N.
struct Instance {
  Eigen::MatrixXd A;  // M x N
  Eigen::VectorXd y;  // M
  double sigma_y = 1.0;
  std::uint64_t seed = 0;

  Eigen::Index m() const { return A.rows(); }
  Eigen::Index n() const { return A.cols(); }
  double alpha() const {
    return static_cast<double>(m()) / static_cast<double>(n());
  }
};

// Deterministic in (m, n, sigma_y, seed): y is drawn first, then A row by
// row, from a fixed PCG32/Box-Muller stream, so the same tuple reproduces
// the same bits everywhere.
Instance sample_instance(Eigen::Index m, Eigen::Index n, double sigma_y,
                         std::uint64_t seed);

// Subtracts the mean of y and the column means of A (the empirical centering
// that removes the global bias mode).
Instance center_instance(const Instance& inst);

// Flat binary round trip: u64 M, u64 N, f64 sigma_y, u64 seed, then the
// M*N entries of A row-major, then the M entries of y; native little-endian
// doubles.
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace scadamp
