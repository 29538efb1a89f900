#include "pcs/schemes.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pcs/error.hpp"
#include "pcs/linalg.hpp"

namespace pcs {

double normalized_scheme::center() const {
  double s = 0.0;
  for (double g : gamma) s += g;
  return 1.0 - 2.0 * s;
}

namespace {

classical_scheme make(const char* label, int order, std::vector<double> alpha, std::vector<double> a) {
  classical_scheme s;
  s.label = label;
  s.order = order;
  s.alpha = std::move(alpha);
  s.a = std::move(a);
  return s;
}

// Maximal-order centered weights on the narrowest stencil per order.
const std::array<classical_scheme, 7>& catalog() {
  static const std::array<classical_scheme, 7> table = {
      make("C4", 4, {1.0 / 4.0}, {3.0 / 4.0}),
      make("C6", 6, {1.0 / 3.0}, {7.0 / 9.0, 1.0 / 36.0}),
      make("C8", 8, {4.0 / 9.0, 1.0 / 36.0}, {20.0 / 27.0, 25.0 / 216.0}),
      make("C10", 10, {1.0 / 2.0, 1.0 / 20.0}, {17.0 / 24.0, 101.0 / 600.0, 1.0 / 600.0}),
      make("C12", 12, {9.0 / 16.0, 9.0 / 100.0, 1.0 / 400.0},
           {21.0 / 32.0, 231.0 / 1000.0, 49.0 / 4000.0}),
      make("C14", 14, {3.0 / 5.0, 3.0 / 25.0, 1.0 / 175.0},
           {31.0 / 50.0, 67.0 / 250.0, 283.0 / 12250.0, 1.0 / 9800.0}),
      make("C16", 16, {16.0 / 25.0, 4.0 / 25.0, 16.0 / 1225.0, 1.0 / 4900.0},
           {72.0 / 125.0, 38.0 / 125.0, 1784.0 / 42875.0, 761.0 / 686000.0}),
  };
  return table;
}

} // namespace

const classical_scheme& builtin_scheme(std::string_view label) {
  for (const auto& s : catalog())
    if (s.label == label) return s;
  throw error(errc::invalid_argument, "unknown scheme label '" + std::string(label) +
                                          "' (expected C4, C6, ... C16)");
}

std::vector<std::string> builtin_labels() {
  std::vector<std::string> out;
  for (const auto& s : catalog()) out.push_back(s.label);
  return out;
}

bool is_builtin(std::string_view label) {
  for (const auto& s : catalog())
    if (s.label == label) return true;
  return false;
}

moment_solve_report derive_classical_report(int nc, int ne) {
  if (nc < 1 || ne < 1) throw error(errc::invalid_argument, "derive: need nc >= 1 and ne >= 1");
  if (nc + ne > 8)
    throw error(errc::invalid_argument,
                "derive: nc + ne > 8 (order > 16) is outside the double-precision comfort zone "
                "of the moment matrix");
  // Matching Taylor coefficients of sum a_k (u_{j+k}-u_{j-k})/h against
  // u'_j + sum alpha_k (u'_{j+k}+u'_{j-k}) kills all even terms by symmetry;
  // the odd terms give, per t = 0..nc+ne-1, the moment row
  //   sum_k (2 a_k k) k^{2t} - sum_k alpha_k 2(2t+1) k^{2t} = delta_{t0}.
  // Unknowns are x_k = 2 a_k k (k = 1..ne) then alpha_k (k = 1..nc).
  const int m = nc + ne;
  linalg::dense_matrix mat(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
  rhs[0] = 1.0;
  for (int t = 0; t < m; ++t) {
    for (int k = 1; k <= ne; ++k)
      mat(static_cast<std::size_t>(t), static_cast<std::size_t>(k - 1)) =
          std::pow(static_cast<double>(k), 2.0 * t);
    for (int k = 1; k <= nc; ++k)
      mat(static_cast<std::size_t>(t), static_cast<std::size_t>(ne + k - 1)) =
          -2.0 * (2.0 * t + 1.0) * std::pow(static_cast<double>(k), 2.0 * t);
  }
  linalg::dense_lu lu(mat);
  const double cond = lu.condition_one_norm();
  auto x = lu.solve(rhs);
  // One refinement pass with an extended-precision residual: the matrix
  // entries are exact integers, so the corrected weights are good to a few
  // ulps even at the order-16 conditioning (~1e10).
  std::vector<double> resid(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    long double acc = rhs[static_cast<std::size_t>(t)];
    for (int j = 0; j < m; ++j)
      acc -= static_cast<long double>(mat(static_cast<std::size_t>(t), static_cast<std::size_t>(j))) *
             static_cast<long double>(x[static_cast<std::size_t>(j)]);
    resid[static_cast<std::size_t>(t)] = static_cast<double>(acc);
  }
  const auto dx = lu.solve(resid);
  for (int j = 0; j < m; ++j) x[static_cast<std::size_t>(j)] += dx[static_cast<std::size_t>(j)];

  moment_solve_report rep;
  rep.condition = cond;
  rep.scheme.order = 2 * m;
  rep.scheme.alpha.assign(x.begin() + ne, x.end());
  rep.scheme.a.resize(static_cast<std::size_t>(ne));
  for (int k = 1; k <= ne; ++k)
    rep.scheme.a[static_cast<std::size_t>(k - 1)] = x[static_cast<std::size_t>(k - 1)] / (2.0 * k);
  const auto& cat = catalog();
  rep.scheme.label = "C" + std::to_string(2 * m);
  for (const auto& s : cat)
    if (s.order == 2 * m && (s.nc() != nc || s.ne() != ne))
      rep.scheme.label += "_" + std::to_string(nc) + std::to_string(ne);
  return rep;
}

classical_scheme derive_classical(int nc, int ne) { return derive_classical_report(nc, ne).scheme; }

normalized_scheme normalize(const classical_scheme& s) {
  double d = 1.0;
  for (double v : s.alpha) d += 2.0 * v;
  if (d == 0.0) throw error(errc::invalid_argument, "normalize: degenerate implicit row");
  normalized_scheme n;
  n.label = s.label;
  n.order = s.order;
  n.gamma.reserve(s.alpha.size());
  n.eta.reserve(s.a.size());
  for (double v : s.alpha) n.gamma.push_back(v / d);
  for (double v : s.a) n.eta.push_back(v / d);
  return n;
}

namespace {

std::string format_weight(double v) {
  char buf[40];
  // 17 significant digits round-trips any double.
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::string format_scheme_line(const classical_scheme& s) {
  std::ostringstream out;
  out << s.label << ", " << s.order << ", " << s.nc() << ", " << s.ne();
  for (double v : s.alpha) out << ", " << format_weight(v);
  for (double v : s.a) out << ", " << format_weight(v);
  return out.str();
}

classical_scheme parse_scheme_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  const auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t\r\n");
    const auto e = t.find_last_not_of(" \t\r\n");
    t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
  };
  for (auto& f : fields) trim(f);
  if (fields.size() < 4) throw error(errc::io, "scheme line: expected 'label, order, nc, ne, weights...'");
  classical_scheme s;
  s.label = fields[0];
  int nc = 0, ne = 0;
  try {
    s.order = std::stoi(fields[1]);
    nc = std::stoi(fields[2]);
    ne = std::stoi(fields[3]);
  } catch (const std::exception&) {
    throw error(errc::io, "scheme line: order/nc/ne must be integers");
  }
  if (s.label.empty() || s.order <= 0 || nc < 1 || ne < 1)
    throw error(errc::io, "scheme line: bad label, order, or stencil sizes");
  if (fields.size() != static_cast<std::size_t>(4 + nc + ne))
    throw error(errc::io, "scheme line: weight count does not match nc + ne");
  try {
    for (int k = 0; k < nc; ++k) s.alpha.push_back(std::stod(fields[static_cast<std::size_t>(4 + k)]));
    for (int k = 0; k < ne; ++k)
      s.a.push_back(std::stod(fields[static_cast<std::size_t>(4 + nc + k)]));
  } catch (const std::exception&) {
    throw error(errc::io, "scheme line: malformed weight value");
  }
  return s;
}

} // namespace pcs
