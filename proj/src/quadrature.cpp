#include "rothaff/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "rothaff/errors.hpp"
#include "rothaff/parallel.hpp"

namespace rothaff {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kNodes = {-0.8611363115940526, -0.3399810435848563,
                                          0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kWeights = {0.3478548451374538, 0.6521451548625461,
                                            0.6521451548625461, 0.3478548451374538};

// Radial coordinate u = r / sqrt(1 + r^2). The measure is 2u du dtheta / 2pi
// and r(u) is analytic, so integrands smooth on C stay smooth at u = 0.
double u_of_r(double r) { return std::isinf(r) ? 1.0 : r / std::sqrt(1 + r * r); }
double r_of_u(double u) { return u / std::sqrt((1 - u) * (1 + u)); }

// Rectangle in (u, theta).
struct Rect {
  double s1, s2, t1, t2;

  double measure() const { return (s2 * s2 - s1 * s1) * (t2 - t1) / kTwoPi; }
  // Radial halving only, or halving in both directions.
  std::vector<Rect> children(bool radial_only) const {
    double sm = 0.5 * (s1 + s2), tm = 0.5 * (t1 + t2);
    if (radial_only) return {Rect{s1, sm, t1, t2}, Rect{sm, s2, t1, t2}};
    return {Rect{s1, sm, t1, tm}, Rect{sm, s2, t1, tm}, Rect{s1, sm, tm, t2}, Rect{sm, s2, tm, t2}};
  }
};

class CellIntegrator {
 public:
  CellIntegrator(const ArchIntegrand& f, const Cell& cell, const QuadOptions& opts)
      : f_(f), chart_(cell.chart()) {
    for (const auto& p : opts.singular_points) {
      std::complex<double> local;
      if (chart_ == Chart::Standard) {
        if (p.at_infinity) continue;
        local = p.z;
      } else {
        if (p.at_infinity)
          local = 0.0;
        else if (p.z == 0.0)
          continue;
        else
          local = 1.0 / p.z;
      }
      if (std::abs(local) > 1.0 + 1e-9) continue;
      double th = std::arg(local);
      if (th < 0) th += kTwoPi;
      singular_.push_back({u_of_r(std::abs(local)), th, std::abs(local) == 0.0});
    }
  }

  QuadResult run(const Cell& cell, double tol, std::int64_t budget) {
    double s1 = u_of_r(cell.r1()), s2 = u_of_r(cell.r2());
    int nt = std::max(1, static_cast<int>(std::ceil((cell.theta2() - cell.theta1()) / (std::numbers::pi / 4) - 1e-9)));
    int ns = 2;
    struct Item {
      double err;
      std::int64_t id;
      Rect rect;
      double fine;
      std::vector<Rect> kids;
      std::vector<double> kid_values;
      bool operator<(const Item& o) const { return err != o.err ? err < o.err : id > o.id; }
    };
    std::priority_queue<Item> queue;
    std::int64_t next_id = 0;
    double total_err = 0;

    auto make_item = [&](const Rect& r, double coarse) {
      Item it{0, next_id++, r, 0, {}, {}};
      finite_ = true;
      Touch touch = touches_singularity(r);
      it.kids = r.children(touch == Touch::Origin);
      for (const auto& k : it.kids) {
        it.kid_values.push_back(rule(k));
        it.fine += it.kid_values.back();
      }
      it.err = std::fabs(it.fine - coarse);
      if (!finite_ || touch != Touch::None) {
        // Bound for a logarithmic singularity inside the rectangle.
        double diam = touch == Touch::Origin ? r.s2 - r.s1 : std::max(r.s2 - r.s1, r.t2 - r.t1);
        it.err = std::max(it.err, r.measure() * (1 + std::fabs(std::log(diam))));
      }
      return it;
    };

    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j) {
        Rect r{s1 + (s2 - s1) * i / ns, s1 + (s2 - s1) * (i + 1) / ns,
               cell.theta1() + (cell.theta2() - cell.theta1()) * j / nt,
               cell.theta1() + (cell.theta2() - cell.theta1()) * (j + 1) / nt};
        auto it = make_item(r, rule(r));
        total_err += it.err;
        queue.push(it);
      }

    std::int64_t refinements = 0;
    while (total_err > tol) {
      if (evaluations_ + 256 > budget) {
        double est = 0, err = 0;
        while (!queue.empty()) {
          est += queue.top().fine;
          err += queue.top().err;
          queue.pop();
        }
        throw QuadratureError("quadrature budget exhausted before reaching tolerance", est, err);
      }
      Item top = queue.top();
      queue.pop();
      total_err -= top.err;
      for (std::size_t k = 0; k < top.kids.size(); ++k) {
        auto it = make_item(top.kids[k], top.kid_values[k]);
        total_err += it.err;
        queue.push(it);
      }
      // Periodic resummation keeps the running total free of drift.
      if (++refinements % 256 == 0) {
        total_err = 0;
        auto copy = queue;
        while (!copy.empty()) {
          total_err += copy.top().err;
          copy.pop();
        }
      }
    }

    // Deterministic summation order: sort leaves by id.
    std::vector<Item> leaves;
    while (!queue.empty()) {
      leaves.push_back(queue.top());
      queue.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Item& a, const Item& b) { return a.id < b.id; });
    QuadResult out;
    for (const auto& it : leaves) {
      out.value += it.fine;
      out.error_bound += it.err;
    }
    out.evaluations = evaluations_;
    return out;
  }

 private:
  struct LocalSingular {
    double s, theta;
    bool at_origin;
  };

  double rule(const Rect& r) {
    double hs = 0.5 * (r.s2 - r.s1), ms = 0.5 * (r.s1 + r.s2);
    double ht = 0.5 * (r.t2 - r.t1), mt = 0.5 * (r.t1 + r.t2);
    double sum = 0;
    for (int a = 0; a < 4; ++a) {
      double u = ms + hs * kNodes[a];
      double rad = r_of_u(u);
      for (int b = 0; b < 4; ++b) {
        double th = mt + ht * kNodes[b];
        double v = f_(ArchSample{std::polar(rad, th), chart_});
        if (!std::isfinite(v)) {
          finite_ = false;
          v = 0;
        }
        sum += kWeights[a] * kWeights[b] * 2 * u * v;
      }
    }
    evaluations_ += 16;
    return sum * hs * ht / kTwoPi;
  }

  enum class Touch { None, Point, Origin };

  Touch touches_singularity(const Rect& r) const {
    Touch found = Touch::None;
    for (const auto& p : singular_) {
      if (p.at_origin) {
        if (r.s1 == 0.0) return Touch::Origin;
        continue;
      }
      double pad_s = 1e-12, pad_t = 1e-12;
      bool in_s = p.s >= r.s1 - pad_s && p.s <= r.s2 + pad_s;
      bool in_t = (p.theta >= r.t1 - pad_t && p.theta <= r.t2 + pad_t) ||
                  (r.t1 <= pad_t && p.theta >= kTwoPi - pad_t) ||
                  (r.t2 >= kTwoPi - pad_t && p.theta <= pad_t);
      if (in_s && in_t) found = Touch::Point;
    }
    return found;
  }

  const ArchIntegrand& f_;
  Chart chart_;
  std::vector<LocalSingular> singular_;
  std::int64_t evaluations_ = 0;
  bool finite_ = true;
};

}  // namespace

QuadResult integrate_arch(const ArchIntegrand& f, const std::vector<Cell>& cells, const QuadOptions& opts) {
  if (!(opts.tol > 0)) throw DomainError("quadrature tolerance must be positive");
  if (opts.budget <= 0) throw DomainError("quadrature budget must be positive");
  double total_measure = 0;
  for (const auto& c : cells) total_measure += fs_cell_measure(c);
  auto results = parallel::map_indexed(cells.size(), [&](std::size_t i) {
    double share = fs_cell_measure(cells[i]) / total_measure;
    auto budget = std::max<std::int64_t>(1024, static_cast<std::int64_t>(opts.budget * share));
    CellIntegrator integ(f, cells[i], opts);
    return integ.run(cells[i], opts.tol * share, budget);
  });
  QuadResult out;
  for (const auto& r : results) {
    out.value += r.value;
    out.error_bound += r.error_bound;
    out.evaluations += r.evaluations;
  }
  return out;
}

QuadResult integrate_arch(const ArchIntegrand& f, const SetS& region, const QuadOptions& opts) {
  auto cells = region.arch_cells();
  if (cells.empty()) return {};
  return integrate_arch(f, cells, opts);
}

}  // namespace rothaff
