#include "saddlesim/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"
#include "saddlesim/rng.hpp"

namespace saddlesim {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

PartitionedDataset parse_libsvm_text(const std::string& text) {
  PartitionedDataset ds;
  ds.row_ptr.push_back(0);
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  std::size_t max_col = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    if (tok[0] == '#') continue;
    double raw_label;
    try {
      raw_label = std::stod(tok);
    } catch (const std::exception&) {
      throw ParseError("bad label '" + tok + "'", lineno);
    }
    ds.label.push_back(raw_label > 0.0 ? 1 : -1);
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected idx:val, got '" + tok + "'", lineno);
      long idx;
      double v;
      try {
        idx = std::stol(tok.substr(0, colon));
        v = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("bad feature token '" + tok + "'", lineno);
      }
      if (idx < 1) throw ParseError("feature index must be >= 1", lineno);
      ds.col.push_back(static_cast<std::uint32_t>(idx - 1));
      ds.val.push_back(v);
      max_col = std::max(max_col, static_cast<std::size_t>(idx));
    }
    ds.row_ptr.push_back(ds.col.size());
  }
  ds.num_samples = ds.label.size();
  if (ds.num_samples == 0) throw EmptyDataset("dataset has no samples");
  ds.dim = max_col;
  ds.m = 1;
  ds.n = 1;
  ds.node_begin = {0, ds.num_samples};
  ds.batch_begin = {{0, ds.num_samples}};
  std::size_t pos = 0;
  for (auto b : ds.label) pos += (b > 0);
  ds.positive_fraction = static_cast<double>(pos) / ds.num_samples;
  return ds;
}

PartitionedDataset load_libsvm(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_libsvm_text(buf.str());
}

PartitionedDataset partition(PartitionedDataset dataset, int m, int n,
                             std::uint64_t seed) {
  const std::size_t N = dataset.num_samples;
  if (m < 1 || n < 1) throw ConfigError("partition needs m >= 1, n >= 1");
  if (N < static_cast<std::size_t>(m) * n)
    throw TooFewSamples("need at least m*n samples, have " + std::to_string(N));

  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng(seed, 0, 0, RngPurpose::data_shuffle);
  for (std::size_t i = N; i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(perm[i - 1], perm[j]);
  }

  PartitionedDataset out;
  out.num_samples = N;
  out.dim = dataset.dim;
  out.positive_fraction = dataset.positive_fraction;
  out.row_ptr.reserve(N + 1);
  out.row_ptr.push_back(0);
  out.col.reserve(dataset.col.size());
  out.val.reserve(dataset.val.size());
  out.label.reserve(N);
  for (std::size_t r = 0; r < N; ++r) {
    const std::size_t src = perm[r];
    out.label.push_back(dataset.label[src]);
    for (std::size_t k = dataset.row_ptr[src]; k < dataset.row_ptr[src + 1]; ++k) {
      out.col.push_back(dataset.col[k]);
      out.val.push_back(dataset.val[k]);
    }
    out.row_ptr.push_back(out.col.size());
  }

  out.m = m;
  out.n = n;
  out.node_begin.assign(m + 1, 0);
  const std::size_t node_base = N / m;
  const std::size_t node_rem = N % m;
  for (int i = 0; i < m; ++i)
    out.node_begin[i + 1] =
        out.node_begin[i] + node_base + (static_cast<std::size_t>(i) < node_rem ? 1 : 0);

  out.batch_begin.assign(m, {});
  for (int i = 0; i < m; ++i) {
    const std::size_t Ni = out.node_samples(i);
    auto& bb = out.batch_begin[i];
    bb.assign(n + 1, 0);
    const std::size_t base = Ni / n;
    const std::size_t rem = Ni % n;
    for (int j = 0; j < n; ++j)
      bb[j + 1] = bb[j] + base + (static_cast<std::size_t>(j) < rem ? 1 : 0);
  }
  return out;
}

PartitionedDataset synthetic_logistic_data(std::size_t num_samples,
                                           std::size_t dim,
                                           std::uint64_t seed) {
  if (num_samples == 0 || dim == 0)
    throw ConfigError("synthetic dataset needs num_samples >= 1 and dim >= 1");
  RngStream rng(seed, 0, 0, RngPurpose::synthetic_data);
  Vec w(dim);
  for (auto& c : w) c = rng.next_gaussian();
  const double wn = std::sqrt(kernels::sumsq(w));
  for (auto& c : w) c = 2.0 * c / wn;

  PartitionedDataset ds;
  ds.num_samples = num_samples;
  ds.dim = dim;
  ds.row_ptr.push_back(0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  std::size_t pos = 0;
  for (std::size_t s = 0; s < num_samples; ++s) {
    double margin = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double a = scale * rng.next_gaussian();
      ds.col.push_back(static_cast<std::uint32_t>(j));
      ds.val.push_back(a);
      margin += a * w[j];
    }
    ds.row_ptr.push_back(ds.col.size());
    const std::int8_t b = rng.next_double() < sigmoid(margin) ? 1 : -1;
    ds.label.push_back(b);
    pos += (b > 0);
  }
  ds.m = 1;
  ds.n = 1;
  ds.node_begin = {0, num_samples};
  ds.batch_begin = {{0, num_samples}};
  ds.positive_fraction = static_cast<double>(pos) / num_samples;
  return ds;
}

void project_ball(Vec& v, double radius) {
  const double nsq = kernels::sumsq(v);
  if (nsq <= radius * radius) return;
  const double f = radius / std::sqrt(nsq);
  for (auto& c : v) c *= f;
}

void SaddleProblem::grad_x_full(int node, const Vec& x, const Vec& y,
                                Vec& out) const {
  Vec tmp;
  out.assign(d_x_, 0.0);
  for (int l = 0; l < data_.n; ++l) {
    grad_x(node, l, x, y, tmp);
    kernels::axpy(out, 1.0 / data_.n, tmp);
  }
}

void SaddleProblem::grad_y_full(int node, const Vec& x, const Vec& y,
                                Vec& out) const {
  Vec tmp;
  out.assign(d_y_, 0.0);
  for (int l = 0; l < data_.n; ++l) {
    grad_y(node, l, x, y, tmp);
    kernels::axpy(out, 1.0 / data_.n, tmp);
  }
}

void SaddleProblem::prox_x(Vec& v, double /*step*/) const {
  project_ball(v, radius_x_);
}

void SaddleProblem::prox_y(Vec& v, double /*step*/) const {
  project_ball(v, radius_y_);
}

namespace {

// ---------------------------------------------------------------------------
// Robust logistic regression.
// f_il(x,y) = (n/N) sum_{s in batch} log(1 + exp(-b_s x'(a_s + y)))
//             + lambda/(2m) |x|^2 - beta/(2m) |y|^2
// ---------------------------------------------------------------------------
class RobustLogisticProblem final : public SaddleProblem {
 public:
  RobustLogisticProblem(PartitionedDataset data, double lambda, double beta,
                        double radius_x, double radius_y, bool mu_per_node)
      : SaddleProblem(std::move(data), static_cast<int>(0), 0, radius_x,
                      radius_y),
        lambda_(lambda),
        beta_(beta) {
    if (lambda <= 0.0 || beta <= 0.0)
      throw ConfigError("robust_logistic needs lambda > 0 and beta > 0");
    if (radius_x <= 0.0 || radius_y <= 0.0)
      throw ConfigError("robust_logistic needs positive radii");
    d_x_ = d_y_ = static_cast<int>(data_.dim);
    const double N = static_cast<double>(data_.num_samples);
    const double m = data_.m;
    const double n = data_.n;

    double Lxx = 0.0, Lyy = 0.0, Lxy = 0.0;
    for (int i = 0; i < data_.m; ++i) {
      for (int j = 0; j < data_.n; ++j) {
        const double Nij = static_cast<double>(data_.batch_samples(i, j));
        double sum_asq = 0.0, sum_an = 0.0;
        const std::size_t begin = data_.sample_begin(i, j);
        for (std::size_t s = begin; s < begin + data_.batch_samples(i, j); ++s) {
          double asq = 0.0;
          for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
            asq += data_.val[k] * data_.val[k];
          sum_asq += asq;
          sum_an += std::sqrt(asq);
        }
        Lxx = std::max(Lxx, n / (2.0 * N) * sum_asq +
                                n * Nij * radius_y * radius_y / (2.0 * N) +
                                lambda / m);
        Lyy = std::max(Lyy, n * Nij * radius_x * radius_x / (4.0 * N) + beta / m);
        Lxy = std::max(Lxy, n / N *
                                ((1.0 + radius_x * radius_y / 4.0) * Nij +
                                 radius_x / 4.0 * sum_an));
      }
    }
    constants_.L_xx = Lxx;
    constants_.L_yy = Lyy;
    constants_.L_xy = constants_.L_yx = Lxy;
    constants_.L = std::max({Lxx, Lyy, Lxy});
    constants_.mu_x = mu_per_node ? lambda / m : lambda;
    constants_.mu_y = mu_per_node ? beta / m : beta;
    constants_.mu = std::min(constants_.mu_x, constants_.mu_y);
    constants_.kappa_f = constants_.L / constants_.mu;
  }

  void grad_x(int node, int batch, const Vec& x, const Vec& y,
              Vec& out) const override {
    out.assign(d_x_, 0.0);
    const double xy = kernels::dot(x, y);
    const double nN = data_.n / static_cast<double>(data_.num_samples);
    double csum = 0.0;
    const std::size_t begin = data_.sample_begin(node, batch);
    const std::size_t end = begin + data_.batch_samples(node, batch);
    for (std::size_t s = begin; s < end; ++s) {
      const double b = data_.label[s];
      double xa = 0.0;
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        xa += data_.val[k] * x[data_.col[k]];
      const double c = -b * sigmoid(-b * (xa + xy));
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        out[data_.col[k]] += c * data_.val[k];
      csum += c;
    }
    // (n/N)(sum_s c_s (a_s + y)) + (lambda/m) x
    for (int j = 0; j < d_x_; ++j)
      out[j] = nN * (out[j] + csum * y[j]) + lambda_ / data_.m * x[j];
  }

  void grad_y(int node, int batch, const Vec& x, const Vec& y,
              Vec& out) const override {
    const double xy = kernels::dot(x, y);
    const double nN = data_.n / static_cast<double>(data_.num_samples);
    double csum = 0.0;
    const std::size_t begin = data_.sample_begin(node, batch);
    const std::size_t end = begin + data_.batch_samples(node, batch);
    for (std::size_t s = begin; s < end; ++s) {
      const double b = data_.label[s];
      double xa = 0.0;
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        xa += data_.val[k] * x[data_.col[k]];
      csum += -b * sigmoid(-b * (xa + xy));
    }
    out.assign(d_y_, 0.0);
    for (int j = 0; j < d_y_; ++j)
      out[j] = nN * csum * x[j] - beta_ / data_.m * y[j];
  }

  double batch_value(int node, int batch, const Vec& x,
                     const Vec& y) const override {
    const double xy = kernels::dot(x, y);
    const double nN = data_.n / static_cast<double>(data_.num_samples);
    double loss = 0.0;
    const std::size_t begin = data_.sample_begin(node, batch);
    const std::size_t end = begin + data_.batch_samples(node, batch);
    for (std::size_t s = begin; s < end; ++s) {
      const double b = data_.label[s];
      double xa = 0.0;
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        xa += data_.val[k] * x[data_.col[k]];
      const double t = -b * (xa + xy);
      // log(1+exp(t)) without overflow
      loss += t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    }
    return nN * loss + lambda_ / (2.0 * data_.m) * kernels::sumsq(x) -
           beta_ / (2.0 * data_.m) * kernels::sumsq(y);
  }

 private:
  double lambda_;
  double beta_;
};

// ---------------------------------------------------------------------------
// AUC maximization. Primal (x, u, v), dual scalar y.
// ---------------------------------------------------------------------------
class AucProblem final : public SaddleProblem {
 public:
  AucProblem(PartitionedDataset data, double lambda, double radius_x,
             double radius_y)
      : SaddleProblem(std::move(data), 0, 1, radius_x, radius_y),
        lambda_(lambda) {
    if (lambda < 0.0) throw ConfigError("auc_maximization needs lambda >= 0");
    q_ = data_.positive_fraction;
    if (q_ <= 0.0 || q_ >= 1.0)
      throw SingleClassDataset("AUC needs both classes present");
    d_x_ = static_cast<int>(data_.dim) + 2;
    d_y_ = 1;

    const double N = static_cast<double>(data_.num_samples);
    const double m = data_.m;
    const double n = data_.n;
    double Lxx = 0.0, Lyy = 0.0, Lxy = 0.0;
    for (int i = 0; i < data_.m; ++i) {
      for (int j = 0; j < data_.n; ++j) {
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        const std::size_t begin = data_.sample_begin(i, j);
        const std::size_t end = begin + data_.batch_samples(i, j);
        for (std::size_t s = begin; s < end; ++s) {
          double asq = 0.0;
          for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
            asq += data_.val[k] * data_.val[k];
          const double cls = data_.label[s] > 0 ? 1.0 - q_ : q_;
          sxx += 2.0 * cls * asq + lambda_ / m + 2.0 * cls;
          syy += 2.0 * q_ * (1.0 - q_);
          sxy += 2.0 * cls * std::sqrt(asq);
        }
        Lxx = std::max(Lxx, n / N * sxx + lambda_ / m);
        Lyy = std::max(Lyy, n / N * syy);
        Lxy = std::max(Lxy, n / N * sxy);
      }
    }
    constants_.L_xx = Lxx;
    constants_.L_yy = Lyy;
    constants_.L_xy = constants_.L_yx = Lxy;
    constants_.L = std::max({Lxx, Lyy, Lxy});
    double min_ni = static_cast<double>(data_.node_samples(0));
    for (int i = 1; i < data_.m; ++i)
      min_ni = std::min(min_ni, static_cast<double>(data_.node_samples(i)));
    constants_.mu_x = std::min(2.0 * q_, 2.0 * (1.0 - q_)) * min_ni / N + lambda_ / m;
    constants_.mu_y = 2.0 * q_ * (1.0 - q_) * min_ni / N;
    constants_.mu = std::min(constants_.mu_x, constants_.mu_y);
    constants_.kappa_f = constants_.L / constants_.mu;
  }

  void grad_x(int node, int batch, const Vec& z, const Vec& y,
              Vec& out) const override {
    out.assign(d_x_, 0.0);
    const int d = d_x_ - 2;
    const double u = z[d], v = z[d + 1], yy = y[0];
    const double nN = data_.n / static_cast<double>(data_.num_samples);
    const std::size_t begin = data_.sample_begin(node, batch);
    const std::size_t end = begin + data_.batch_samples(node, batch);
    for (std::size_t s = begin; s < end; ++s) {
      double t = 0.0;
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        t += data_.val[k] * z[data_.col[k]];
      double coef;  // multiplies a_s in the x block
      if (data_.label[s] > 0) {
        coef = 2.0 * (1.0 - q_) * (t - u) - 2.0 * (1.0 + yy) * (1.0 - q_);
        out[d] += -2.0 * (1.0 - q_) * (t - u);
      } else {
        coef = 2.0 * q_ * (t - v) + 2.0 * (1.0 + yy) * q_;
        out[d + 1] += -2.0 * q_ * (t - v);
      }
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        out[data_.col[k]] += coef * data_.val[k];
    }
    for (int j = 0; j < d_x_; ++j) out[j] *= nN;
    // lambda acts on the x block only
    for (int j = 0; j < d; ++j) out[j] += lambda_ / data_.m * z[j];
  }

  void grad_y(int node, int batch, const Vec& z, const Vec& y,
              Vec& out) const override {
    const double yy = y[0];
    const double nN = data_.n / static_cast<double>(data_.num_samples);
    double g = 0.0;
    const std::size_t begin = data_.sample_begin(node, batch);
    const std::size_t end = begin + data_.batch_samples(node, batch);
    for (std::size_t s = begin; s < end; ++s) {
      double t = 0.0;
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        t += data_.val[k] * z[data_.col[k]];
      g += -2.0 * q_ * (1.0 - q_) * yy +
           2.0 * (data_.label[s] > 0 ? -(1.0 - q_) * t : q_ * t);
    }
    out.assign(1, nN * g);
  }

  double batch_value(int node, int batch, const Vec& z,
                     const Vec& y) const override {
    const int d = d_x_ - 2;
    const double u = z[d], v = z[d + 1], yy = y[0];
    const double nN = data_.n / static_cast<double>(data_.num_samples);
    double acc = 0.0;
    const std::size_t begin = data_.sample_begin(node, batch);
    const std::size_t end = begin + data_.batch_samples(node, batch);
    for (std::size_t s = begin; s < end; ++s) {
      double t = 0.0;
      for (std::size_t k = data_.row_ptr[s]; k < data_.row_ptr[s + 1]; ++k)
        t += data_.val[k] * z[data_.col[k]];
      double f = -q_ * (1.0 - q_) * yy * yy;
      if (data_.label[s] > 0)
        f += (1.0 - q_) * (t - u) * (t - u) - 2.0 * (1.0 + yy) * (1.0 - q_) * t;
      else
        f += q_ * (t - v) * (t - v) + 2.0 * (1.0 + yy) * q_ * t;
      acc += f;
    }
    double xsq = 0.0;
    for (int j = 0; j < d; ++j) xsq += z[j] * z[j];
    return nN * acc + lambda_ / (2.0 * data_.m) * xsq;
  }

 private:
  double lambda_;
  double q_;
};

}  // namespace

std::unique_ptr<SaddleProblem> robust_logistic(PartitionedDataset dataset,
                                               double lambda, double beta,
                                               double radius_x, double radius_y,
                                               bool mu_per_node) {
  return std::make_unique<RobustLogisticProblem>(std::move(dataset), lambda,
                                                 beta, radius_x, radius_y,
                                                 mu_per_node);
}

std::unique_ptr<SaddleProblem> auc_maximization(PartitionedDataset dataset,
                                                double lambda, double radius_x,
                                                double radius_y) {
  return std::make_unique<AucProblem>(std::move(dataset), lambda, radius_x,
                                      radius_y);
}

}  // namespace saddlesim
