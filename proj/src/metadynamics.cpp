#include "metadyn/metadynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "metadyn/errors.hpp"

namespace metadyn {

namespace {

constexpr std::size_t kMaxGridEntries = 100'000'000;

double gaussian(double s, double c, double sigma) {
  const double u = (s - c) / sigma;
  return std::exp(-0.5 * u * u);
}

// Cubic Hermite basis on t in [0,1]; index 0/1 selects the left/right node.
double hermite_value(int node, double t) {
  return node == 0 ? (2 * t - 3) * t * t + 1 : (-2 * t + 3) * t * t;
}
double hermite_slope(int node, double t) {
  return node == 0 ? ((t - 2) * t + 1) * t : (t - 1) * t * t;
}
double hermite_value_dt(int node, double t) {
  return node == 0 ? 6 * t * (t - 1) : 6 * t * (1 - t);
}
double hermite_slope_dt(int node, double t) {
  return node == 0 ? (3 * t - 4) * t + 1 : (3 * t - 2) * t;
}

}  // namespace

HillStore::HillStore(std::vector<double> sigma, double height, int stride)
    : sigma_(std::move(sigma)), height_(height), stride_(stride) {
  if (sigma_.empty() || sigma_.size() > 3) throw ConfigError("metadynamics supports 1 to 3 collective variables");
  for (double s : sigma_)
    if (!(s > 0.0)) throw ConfigError("hill widths must be positive");
  if (!(height_ >= 0.0)) throw ConfigError("hill height must be non-negative");
  if (stride_ < 1) throw ConfigError("hill stride must be >= 1");
}

void HillStore::enable_grid(const GridSpec& spec, double cutoff) {
  const auto d = static_cast<std::size_t>(dims());
  if (spec.lower.size() != d || spec.upper.size() != d || spec.bins.size() != d)
    throw ConfigError("grid needs bounds and bins for every collective variable");
  Grid g;
  g.spec = spec;
  g.cutoff = cutoff;
  g.spacing.resize(d);
  g.strides.resize(d);
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(spec.lower[i]) || !std::isfinite(spec.upper[i]) || !(spec.upper[i] > spec.lower[i]))
      throw ConfigError("grid bounds must be finite with upper > lower");
    if (spec.bins[i] < 1) throw ConfigError("grid needs at least one bin per dimension");
    g.spacing[i] = (spec.upper[i] - spec.lower[i]) / spec.bins[i];
    g.strides[i] = n;
    n *= static_cast<std::size_t>(spec.bins[i]) + 1;
  }
  g.n_nodes = n;
  const std::size_t per_node = std::size_t{1} << d;
  if (n * per_node > kMaxGridEntries) throw ConfigError("grid too large; reduce the bin count");
  g.data.assign(n * per_node, 0.0);
  grid_ = std::move(g);
  for (const Hill& h : hills_) add_to_grid(h);
}

const GridSpec& HillStore::grid_spec() const {
  if (!grid_) throw Error("grid is not enabled");
  return grid_->spec;
}

void HillStore::check_in_grid(std::span<const double> s) const {
  for (int i = 0; i < dims(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (!(s[u] >= grid_->spec.lower[u] && s[u] <= grid_->spec.upper[u]))
      throw OutOfGrid("collective variable " + std::to_string(i) + " = " + std::to_string(s[u]) +
                      " lies outside the grid [" + std::to_string(grid_->spec.lower[u]) + ", " +
                      std::to_string(grid_->spec.upper[u]) + "]");
  }
}

void HillStore::deposit(std::span<const double> cv_values, std::int64_t step) {
  if (static_cast<int>(cv_values.size()) != dims()) throw Error("hill center has the wrong dimension");
  if (step % stride_ != 0) throw Error("hills are deposited only on multiples of the stride");
  if (!hills_.empty() && step < hills_.back().step) throw Error("hills must be deposited in time order");
  if (grid_) check_in_grid(cv_values);
  Hill h{{cv_values.begin(), cv_values.end()}, sigma_, height_, step};
  if (grid_) add_to_grid(h);
  hills_.push_back(std::move(h));
}

void HillStore::add_to_grid(const Hill& hill) {
  Grid& g = *grid_;
  const int d = dims();
  const std::size_t per_node = std::size_t{1} << d;
  std::array<int, 3> lo{}, hi{};
  for (int i = 0; i < d; ++i) {
    const double reach = g.cutoff * hill.sigma[i];
    lo[i] = std::max(0, static_cast<int>(std::ceil((hill.center[i] - reach - g.spec.lower[i]) / g.spacing[i])));
    hi[i] = std::min(g.spec.bins[i],
                     static_cast<int>(std::floor((hill.center[i] + reach - g.spec.lower[i]) / g.spacing[i])));
    if (lo[i] > hi[i]) return;
  }
  // Per-dimension Gaussian factor and its derivative at every node in range.
  std::array<std::vector<double>, 3> val, der;
  for (int i = 0; i < d; ++i) {
    for (int node = lo[i]; node <= hi[i]; ++node) {
      const double s = g.spec.lower[i] + node * g.spacing[i];
      const double gv = gaussian(s, hill.center[i], hill.sigma[i]);
      val[i].push_back(gv);
      der[i].push_back(-(s - hill.center[i]) / (hill.sigma[i] * hill.sigma[i]) * gv);
    }
  }
  std::array<int, 3> idx = lo;
  while (true) {
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) flat += static_cast<std::size_t>(idx[i]) * g.strides[i];
    double* node = &g.data[flat * per_node];
    for (std::size_t mask = 0; mask < per_node; ++mask) {
      double f = hill.height;
      for (int i = 0; i < d; ++i) {
        const auto off = static_cast<std::size_t>(idx[i] - lo[i]);
        f *= (mask >> i) & 1U ? der[i][off] : val[i][off];
      }
      node[mask] += f;
    }
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] <= hi[i]) break;
      idx[i] = lo[i];
    }
    if (i == d) break;
  }
}

void HillStore::interpolate(std::span<const double> s, double* value, std::vector<double>* grad) const {
  const Grid& g = *grid_;
  const int d = dims();
  const std::size_t per_node = std::size_t{1} << d;
  std::array<int, 3> cell{};
  std::array<double, 3> t{};
  for (int i = 0; i < d; ++i) {
    const double x = (s[i] - g.spec.lower[i]) / g.spacing[i];
    cell[i] = std::min(g.spec.bins[i] - 1, std::max(0, static_cast<int>(std::floor(x))));
    t[i] = x - cell[i];
  }
  if (value) *value = 0.0;
  if (grad) grad->assign(static_cast<std::size_t>(d), 0.0);

  const std::size_t corners = std::size_t{1} << d;
  for (std::size_t corner = 0; corner < corners; ++corner) {
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) flat += static_cast<std::size_t>(cell[i] + ((corner >> i) & 1U)) * g.strides[i];
    const double* node = &g.data[flat * per_node];
    for (std::size_t mask = 0; mask < per_node; ++mask) {
      std::array<double, 3> basis{}, basis_ds{};
      for (int i = 0; i < d; ++i) {
        const int side = static_cast<int>((corner >> i) & 1U);
        if ((mask >> i) & 1U) {
          basis[i] = g.spacing[i] * hermite_slope(side, t[i]);
          basis_ds[i] = hermite_slope_dt(side, t[i]);
        } else {
          basis[i] = hermite_value(side, t[i]);
          basis_ds[i] = hermite_value_dt(side, t[i]) / g.spacing[i];
        }
      }
      if (value) {
        double b = node[mask];
        for (int i = 0; i < d; ++i) b *= basis[i];
        *value += b;
      }
      if (grad) {
        for (int j = 0; j < d; ++j) {
          double b = node[mask];
          for (int i = 0; i < d; ++i) b *= i == j ? basis_ds[i] : basis[i];
          (*grad)[static_cast<std::size_t>(j)] += b;
        }
      }
    }
  }
}

double HillStore::value_direct(std::span<const double> s) const {
  double v = 0.0;
  for (const Hill& h : hills_) {
    double f = h.height;
    for (int i = 0; i < dims(); ++i) f *= gaussian(s[i], h.center[i], h.sigma[i]);
    v += f;
  }
  return v;
}

std::vector<double> HillStore::gradient_direct(std::span<const double> s) const {
  std::vector<double> grad(static_cast<std::size_t>(dims()), 0.0);
  for (const Hill& h : hills_) {
    double f = h.height;
    for (int i = 0; i < dims(); ++i) f *= gaussian(s[i], h.center[i], h.sigma[i]);
    for (int i = 0; i < dims(); ++i) grad[i] += -(s[i] - h.center[i]) / (h.sigma[i] * h.sigma[i]) * f;
  }
  return grad;
}

double HillStore::value(std::span<const double> s) const {
  if (!grid_) return value_direct(s);
  check_in_grid(s);
  double v = 0.0;
  interpolate(s, &v, nullptr);
  return v;
}

std::vector<double> HillStore::gradient(std::span<const double> s) const {
  if (!grid_) return gradient_direct(s);
  check_in_grid(s);
  std::vector<double> grad;
  interpolate(s, nullptr, &grad);
  return grad;
}

double HillStore::node_value(std::span<const int> node) const {
  if (!grid_) throw Error("grid is not enabled");
  std::size_t flat = 0;
  for (int i = 0; i < dims(); ++i) flat += static_cast<std::size_t>(node[i]) * grid_->strides[i];
  return grid_->data[flat << dims()];
}

std::vector<double> HillStore::node_position(std::span<const int> node) const {
  if (!grid_) throw Error("grid is not enabled");
  std::vector<double> s(static_cast<std::size_t>(dims()));
  for (int i = 0; i < dims(); ++i) s[i] = grid_->spec.lower[i] + node[i] * grid_->spacing[i];
  return s;
}

void HillStore::write_hills(std::ostream& out) const {
  char buf[64];
  for (const Hill& h : hills_) {
    out << h.step;
    for (double c : h.center) {
      std::snprintf(buf, sizeof buf, " %.17g", c);
      out << buf;
    }
    for (double w : h.sigma) {
      std::snprintf(buf, sizeof buf, " %.17g", w);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, " %.17g", h.height);
    out << buf << '\n';
  }
}

BiasResult bias_and_force(const HillStore& store, std::span<const CVResult> cvs) {
  if (static_cast<int>(cvs.size()) != store.dims())
    throw Error("expected " + std::to_string(store.dims()) + " collective variables");
  std::vector<double> s(cvs.size());
  for (std::size_t i = 0; i < cvs.size(); ++i) s[i] = cvs[i].value;

  BiasResult out;
  out.value = store.value(s);
  out.dv_ds = store.gradient(s);
  out.forces = Coords<double>::Zero(3, cvs.front().grad.cols());
  for (std::size_t i = 0; i < cvs.size(); ++i) out.forces -= out.dv_ds[i] * cvs[i].grad;
  return out;
}

}  // namespace metadyn
