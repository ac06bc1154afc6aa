#include "scadamp/instance.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "scadamp/rng.hpp"

namespace scadamp {

namespace {

void check_dims(Eigen::Index m, Eigen::Index n, double sigma_y) {
  if (m < 1 || n < 1) throw std::invalid_argument("instance: m, n must be >= 1");
  if (m >= n) throw std::invalid_argument("instance: need m < n");
  if (!(sigma_y > 0.0) || !std::isfinite(sigma_y))
    throw std::invalid_argument("instance: sigma_y must be positive");
  if (static_cast<double>(m) * static_cast<double>(n) > 5e8)
    throw std::invalid_argument("instance: m*n too large");
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Instance sample_instance(Eigen::Index m, Eigen::Index n, double sigma_y,
                         std::uint64_t seed) {
  check_dims(m, n, sigma_y);
  Instance inst;
  inst.sigma_y = sigma_y;
  inst.seed = seed;
  inst.y.resize(m);
  inst.A.resize(m, n);
  GaussianStream g(seed);
  for (Eigen::Index i = 0; i < m; ++i) inst.y[i] = sigma_y * g.next();
  double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) inst.A(i, j) = scale * g.next();
  return inst;
}

Instance center_instance(const Instance& inst) {
  Instance out = inst;
  out.y.array() -= inst.y.mean();
  Eigen::RowVectorXd col_means = inst.A.colwise().mean();
  out.A.rowwise() -= col_means;
  return out;
}

void save_instance(const Instance& inst, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("save_instance: cannot open " + path);
  std::uint64_t m = static_cast<std::uint64_t>(inst.m());
  std::uint64_t n = static_cast<std::uint64_t>(inst.n());
  auto put = [&](const void* p, std::size_t bytes) {
    if (std::fwrite(p, 1, bytes, f.get()) != bytes)
      throw std::runtime_error("save_instance: short write to " + path);
  };
  put(&m, 8);
  put(&n, 8);
  put(&inst.sigma_y, 8);
  put(&inst.seed, 8);
  for (Eigen::Index i = 0; i < inst.m(); ++i)
    for (Eigen::Index j = 0; j < inst.n(); ++j) {
      double v = inst.A(i, j);
      put(&v, 8);
    }
  for (Eigen::Index i = 0; i < inst.m(); ++i) {
    double v = inst.y[i];
    put(&v, 8);
  }
}

Instance load_instance(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error("load_instance: cannot open " + path);
  auto get = [&](void* p, std::size_t bytes) {
    if (std::fread(p, 1, bytes, f.get()) != bytes)
      throw std::runtime_error("load_instance: truncated file " + path);
  };
  std::uint64_t m = 0, n = 0, seed = 0;
  double sigma_y = 0.0;
  get(&m, 8);
  get(&n, 8);
  get(&sigma_y, 8);
  get(&seed, 8);
  check_dims(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n),
             sigma_y);
  Instance inst;
  inst.sigma_y = sigma_y;
  inst.seed = seed;
  inst.A.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  inst.y.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < inst.m(); ++i)
    for (Eigen::Index j = 0; j < inst.n(); ++j) {
      double v;
      get(&v, 8);
      inst.A(i, j) = v;
    }
  for (Eigen::Index i = 0; i < inst.m(); ++i) {
    double v;
    get(&v, 8);
    inst.y[i] = v;
  }
  char extra;
  if (std::fread(&extra, 1, 1, f.get()) == 1)
    throw std::runtime_error("load_instance: trailing bytes in " + path);
  return inst;
}

}  // namespace scadamp
