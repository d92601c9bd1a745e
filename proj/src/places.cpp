#include "rothaff/places.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rothaff/errors.hpp"
#include "rothaff/factor.hpp"
#include "rothaff/roots.hpp"
#include "rothaff/text.hpp"

namespace rothaff {

Polarization parse_polarization(const std::string& s) {
  if (s == "q") return Polarization::NumberFieldQ;
  if (s == "qt") return Polarization::FunctionFieldQt;
  throw ParseError("unknown polarization '" + s + "' (expected q or qt)");
}

std::string to_string(Polarization pol) {
  return pol == Polarization::NumberFieldQ ? "q" : "qt";
}

std::complex<double> ArchSample::point() const {
  if (chart == Chart::Standard) return z;
  if (z == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  return 1.0 / z;
}

Place make_vertical(const BigInt& p) {
  if (!is_probable_prime(p)) throw DomainError(p.get_str() + " is not prime");
  return VerticalPrime{p};
}

Place make_horizontal(const IntPoly& f) {
  if (f.degree() < 1 || !f.is_primitive() || f.lead() < 0)
    throw DomainError("horizontal place needs a primitive polynomial of positive degree: " +
                      f.to_string());
  auto fac = factor_q(f);
  if (fac.factors.size() != 1 || fac.factors[0].multiplicity != 1)
    throw DomainError(f.to_string() + " is not irreducible over Q");
  return HorizontalFinite{f};
}

bool is_archimedean(const Place& v) { return std::holds_alternative<ArchSample>(v); }

std::string place_to_string(const Place& v) {
  if (auto* p = std::get_if<VerticalPrime>(&v)) return "p:" + p->p.get_str();
  if (auto* f = std::get_if<HorizontalFinite>(&v)) return "f:" + f->f.to_string();
  if (std::holds_alternative<HorizontalInfinity>(v)) return "inf";
  const auto& a = std::get<ArchSample>(v);
  return std::string("z:") + format_shortest(a.z.real()) + "," + format_shortest(a.z.imag()) +
         (a.chart == Chart::Inverted ? ",inv" : "");
}

Place parse_place(const std::string& text) {
  std::string s = trim(text);
  if (s == "inf") return HorizontalInfinity{};
  if (s.rfind("p:", 0) == 0) {
    try {
      return make_vertical(BigInt(trim(s.substr(2))));
    } catch (const std::invalid_argument&) {
      throw ParseError("bad prime in '" + s + "'");
    }
  }
  if (s.rfind("f:", 0) == 0) return make_horizontal(parse_int_poly(s.substr(2)));
  if (s.rfind("z:", 0) == 0) {
    auto parts = split(s.substr(2), ',');
    if (parts.size() < 2 || parts.size() > 3) throw ParseError("bad archimedean sample '" + s + "'");
    ArchSample a{{parse_double(parts[0]), parse_double(parts[1])}, Chart::Standard};
    if (parts.size() == 3) {
      if (trim(parts[2]) != "inv") throw ParseError("bad chart in '" + s + "'");
      a.chart = Chart::Inverted;
    }
    return a;
  }
  throw ParseError("unknown place '" + s + "'");
}

Cell::Cell(Chart chart, double r1, double r2, double theta1, double theta2)
    : chart_(chart), r1_(r1), r2_(r2), theta1_(theta1), theta2_(theta2) {
  const double two_pi = 2 * std::numbers::pi;
  if (!(r1 >= 0 && r1 < r2 && r2 <= 1 && theta1 >= 0 && theta1 < theta2 && theta2 <= two_pi))
    throw DomainError("degenerate or out-of-range cell");
  if (!(fs_cell_measure(*this) > 0)) throw DomainError("cell has zero measure");
}

Cell Cell::full_disc(Chart chart) { return Cell(chart, 0, 1, 0, 2 * std::numbers::pi); }

bool Cell::overlaps(const Cell& o) const {
  // Opposite charts meet only along |z| = 1, which has measure zero.
  if (chart_ != o.chart_) return false;
  bool r = std::max(r1_, o.r1_) < std::min(r2_, o.r2_);
  bool t = std::max(theta1_, o.theta1_) < std::min(theta2_, o.theta2_);
  return r && t;
}

bool Cell::contains(const ArchSample& s) const {
  std::complex<double> local = s.chart == chart_ ? s.z : (s.z == 0.0 ? s.z : 1.0 / s.z);
  if (s.chart != chart_ && s.z == 0.0) return false;
  double r = std::abs(local);
  double th = std::arg(local);
  if (th < 0) th += 2 * std::numbers::pi;
  return r >= r1_ && r <= r2_ && th >= theta1_ && th <= theta2_;
}

double fs_cell_measure(const Cell& c) {
  auto s = [](double r) { return r * r / (1 + r * r); };
  return (c.theta2() - c.theta1()) / (2 * std::numbers::pi) * (s(c.r2()) - s(c.r1()));
}

double hm_weight(const Place& v, Polarization pol) {
  if (auto* p = std::get_if<VerticalPrime>(&v)) return log_abs(p->p);
  if (pol == Polarization::NumberFieldQ)
    throw DomainError("K = Q has no horizontal places");
  if (std::holds_alternative<HorizontalInfinity>(v)) return 0.0;
  if (auto* f = std::get_if<HorizontalFinite>(&v)) {
    double w = log_abs(f->f.lead());
    for (const auto& r : complex_roots(f->f)) w += 0.5 * std::log1p(std::norm(r.value()));
    return w;
  }
  throw DomainError("h_M weight is defined only at non-archimedean places");
}

long ord_at_place(const RatFunc& xi, const Place& v) {
  if (auto* p = std::get_if<VerticalPrime>(&v)) return ord_at_prime(xi, p->p);
  if (auto* f = std::get_if<HorizontalFinite>(&v)) return ord_at(xi, f->f);
  if (std::holds_alternative<HorizontalInfinity>(v)) return ord_at_infinity(xi);
  throw DomainError("order is defined only at non-archimedean places");
}

double abs_value(const RatFunc& xi, const Place& v, Polarization pol) {
  if (pol == Polarization::NumberFieldQ && !xi.is_constant() && !xi.is_zero())
    throw DomainError(xi.to_string() + " is not an element of Q");
  if (const auto* a = std::get_if<ArchSample>(&v)) {
    if (pol == Polarization::NumberFieldQ) return std::fabs(xi.content().get_d());
    double r = RatFuncEvaluator(xi).abs_at(a->z, a->chart == Chart::Inverted);
    if (std::isinf(r)) throw DomainError("evaluation of " + xi.to_string() + " at a pole");
    return r;
  }
  if (xi.is_zero()) return 0.0;
  double w = hm_weight(v, pol);
  if (w == 0.0) return 1.0;
  return std::exp(-w * static_cast<double>(ord_at_place(xi, v)));
}

std::vector<Cell> SetS::arch_cells() const {
  if (all_archimedean) return {Cell::full_disc(Chart::Standard), Cell::full_disc(Chart::Inverted)};
  return cells;
}

double SetS::arch_measure() const {
  double m = 0;
  for (const auto& c : arch_cells()) m += fs_cell_measure(c);
  return m;
}

double SetS::measure() const { return arch_measure() + static_cast<double>(finite_places.size()); }

void SetS::validate() const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i].overlaps(cells[j]))
        throw DomainError("cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
  for (std::size_t i = 0; i < finite_places.size(); ++i) {
    if (is_archimedean(finite_places[i]))
      throw DomainError("archimedean sample listed as a finite place");
    for (std::size_t j = i + 1; j < finite_places.size(); ++j)
      if (finite_places[i] == finite_places[j])
        throw DomainError("finite place listed twice: " + place_to_string(finite_places[i]));
  }
}

bool SetS::disjoint_from(const SetS& other) const {
  bool arch_a = all_archimedean || !cells.empty();
  bool arch_b = other.all_archimedean || !other.cells.empty();
  if ((all_archimedean && arch_b) || (other.all_archimedean && arch_a)) return false;
  for (const auto& a : cells)
    for (const auto& b : other.cells)
      if (a.overlaps(b)) return false;
  for (const auto& a : finite_places)
    for (const auto& b : other.finite_places)
      if (a == b) return false;
  return true;
}

std::string serialize_set(const SetS& s) {
  std::ostringstream os;
  if (s.all_archimedean) os << "archimedean\n";
  for (const auto& c : s.cells)
    os << "(" << (c.chart() == Chart::Standard ? "standard" : "inverted") << ", "
       << format_shortest(c.r1()) << ", " << format_shortest(c.r2()) << ", "
       << format_shortest(c.theta1()) << ", " << format_shortest(c.theta2()) << ")\n";
  for (const auto& v : s.finite_places) os << place_to_string(v) << "\n";
  return os.str();
}

SetS parse_set(const std::string& text) {
  SetS out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "archimedean") {
      out.all_archimedean = true;
    } else if (line.front() == '(') {
      if (line.back() != ')') throw ParseError("unterminated cell '" + line + "'");
      auto parts = split(line.substr(1, line.size() - 2), ',');
      if (parts.size() != 5) throw ParseError("cell needs 5 fields: '" + line + "'");
      std::string chart = trim(parts[0]);
      Chart ch;
      if (chart == "standard")
        ch = Chart::Standard;
      else if (chart == "inverted")
        ch = Chart::Inverted;
      else
        throw ParseError("unknown chart '" + chart + "'");
      out.cells.emplace_back(ch, parse_double(parts[1]), parse_double(parts[2]),
                             parse_double(parts[3]), parse_double(parts[4]));
    } else {
      out.finite_places.push_back(parse_place(line));
    }
  }
  out.validate();
  return out;
}

double MKConstant::integral() const {
  double total = 0;
  for (const auto& t : terms) {
    double m = std::holds_alternative<Cell>(t.support) ? fs_cell_measure(std::get<Cell>(t.support)) : 1.0;
    total += t.value * m;
  }
  return total;
}

double MKConstant::support_measure() const {
  double total = 0;
  for (const auto& t : terms)
    total += std::holds_alternative<Cell>(t.support) ? fs_cell_measure(std::get<Cell>(t.support)) : 1.0;
  return total;
}

}  // namespace rothaff
