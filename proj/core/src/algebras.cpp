#include "coalg/algebras.hpp"

#include <cmath>

namespace coalg {
namespace algebras {

namespace {

Expression ph(const std::string& s) { return Expression::placeholder(s); }

Expression primitive(const std::string& gen) {
  return ph(gen + "@L") + ph(gen + "@R");
}

void set_bracket(CoalgebraSpec& spec, const std::string& a, const std::string& b,
                 Expression value) {
  const int i = spec.generator_index(a);
  const int j = spec.generator_index(b);
  if (i < j)
    spec.bracket_table.emplace(std::make_pair(i, j), std::move(value));
  else
    spec.bracket_table.emplace(std::make_pair(j, i), -value);
}

}  // namespace

CoalgebraSpec sl2() {
  CoalgebraSpec s;
  s.name = "sl2";
  s.generators = {"J-", "J+", "J3"};
  s.site_param = "b";
  set_bracket(s, "J3", "J+", 2.0 * ph("J+"));
  set_bracket(s, "J3", "J-", -2.0 * ph("J-"));
  set_bracket(s, "J-", "J+", 4.0 * ph("J3"));
  s.casimirs.push_back({"C", ph("J-") * ph("J+") - pow(ph("J3"), 2.0), false});
  for (const auto& g : s.generators) s.coproduct.emplace(g, primitive(g));
  const Expression q = Expression::q(0), p = Expression::p(0);
  const Expression b = Expression::param("b", 0);
  s.realization.emplace("J-", q * q);
  s.realization.emplace("J+", p * p + b / (q * q));
  s.realization.emplace("J3", q * p);
  return s;
}

CoalgebraSpec sl2z() {
  CoalgebraSpec s;
  s.name = "sl2z";
  s.generators = {"J-", "J+", "J3"};
  s.site_param = "b";
  const Expression z = Expression::param("z");
  // sinh(zJ-)/z written as J- sinhc(zJ-), smooth through z = 0
  set_bracket(s, "J3", "J+", 2.0 * ph("J+") * cosh(z * ph("J-")));
  set_bracket(s, "J3", "J-", -2.0 * ph("J-") * sinhc(z * ph("J-")));
  set_bracket(s, "J-", "J+", 4.0 * ph("J3"));
  s.casimirs.push_back(
      {"C", ph("J-") * sinhc(z * ph("J-")) * ph("J+") - pow(ph("J3"), 2.0), false});
  s.coproduct.emplace("J-", primitive("J-"));
  for (const std::string g : {"J+", "J3"})
    s.coproduct.emplace(g, ph(g + "@L") * exp(z * ph("J-@R")) +
                               exp(-(z * ph("J-@L"))) * ph(g + "@R"));
  const Expression q = Expression::q(0), p = Expression::p(0);
  const Expression b = Expression::param("b", 0);
  const Expression q2 = q * q;
  const Expression sc = sinhc(z * q2);
  s.realization.emplace("J-", q2);
  // z b / sinh(z q^2) = b / (q^2 sinhc(z q^2))
  s.realization.emplace("J+", sc * p * p + b / (q2 * sc));
  s.realization.emplace("J3", sc * q * p);
  return s;
}

CoalgebraSpec h6() {
  CoalgebraSpec s;
  s.name = "h6";
  s.generators = {"K", "A+", "A-", "B+", "B-", "M"};
  s.site_param = "lambda";
  set_bracket(s, "K", "A+", ph("A+"));
  set_bracket(s, "K", "A-", -ph("A-"));
  set_bracket(s, "A-", "A+", ph("M"));
  set_bracket(s, "K", "B+", 2.0 * ph("B+"));
  set_bracket(s, "K", "B-", -2.0 * ph("B-"));
  set_bracket(s, "B-", "B+", 4.0 * ph("K") + 2.0 * ph("M"));
  set_bracket(s, "A+", "B-", -2.0 * ph("A-"));
  set_bracket(s, "A-", "B+", 2.0 * ph("A+"));
  // {A+,B+} = {A-,B-} = 0 and M central: omitted pairs default to zero
  s.casimirs.push_back({"C1", ph("M"), true});
  // working Casimir C2/C1
  const Expression KM = ph("K") + ph("M") / 2.0;
  s.casimirs.push_back({"C",
                        ph("M") * ph("B+") * ph("B-") - ph("B+") * pow(ph("A-"), 2.0) -
                            ph("B-") * pow(ph("A+"), 2.0) - ph("M") * pow(KM, 2.0) +
                            2.0 * ph("A-") * ph("A+") * KM,
                        false});
  for (const auto& g : s.generators) s.coproduct.emplace(g, primitive(g));
  const Expression q = Expression::q(0), p = Expression::p(0);
  const Expression lam = Expression::param("lambda", 0);
  s.realization.emplace("A+", lam * p);
  s.realization.emplace("A-", lam * q);
  s.realization.emplace("K", q * p - lam * lam / 2.0);
  s.realization.emplace("B+", p * p);
  s.realization.emplace("B-", q * q);
  s.realization.emplace("M", lam * lam);
  return s;
}

// ---------------------------------------------------------------------------
// Closed-form N-site realizations

namespace {

void check_len(int N, std::size_t got, const char* what) {
  if (static_cast<int>(got) != N)
    throw DomainError(std::string(what) + ": expected exactly N entries, got " +
                      std::to_string(got));
}

Expression sum_range(int lo, int hi, const std::function<Expression(int)>& term) {
  Expression s = 0.0;
  for (int i = lo; i < hi; ++i) s = s + term(i);
  return s;
}

}  // namespace

std::map<std::string, Expression> sl2_realized(int N, const std::vector<double>& b) {
  check_len(N, b.size(), "sl2_realized b");
  auto q = [](int i) { return Expression::q(i); };
  auto p = [](int i) { return Expression::p(i); };
  std::map<std::string, Expression> out;
  out.emplace("J-", sum_range(0, N, [&](int i) { return q(i) * q(i); }));
  out.emplace("J+", sum_range(0, N, [&](int i) {
                return p(i) * p(i) + Expression::constant(b[i]) / (q(i) * q(i));
              }));
  out.emplace("J3", sum_range(0, N, [&](int i) { return q(i) * p(i); }));
  return out;
}

namespace {

// exp{-z sum_{k<i} q_k^2 + z sum_{l>i} q_l^2}, the site-ordering weight of the
// deformed realization.
Expression site_weight(int i, int N, double z) {
  Expression arg = 0.0;
  for (int k = 0; k < i; ++k) arg = arg - Expression::constant(z) * Expression::q(k) * Expression::q(k);
  for (int l = i + 1; l < N; ++l)
    arg = arg + Expression::constant(z) * Expression::q(l) * Expression::q(l);
  return exp(arg);
}

}  // namespace

std::map<std::string, Expression> sl2z_realized(int N, const std::vector<double>& b,
                                                double z) {
  check_len(N, b.size(), "sl2z_realized b");
  auto q = [](int i) { return Expression::q(i); };
  auto p = [](int i) { return Expression::p(i); };
  const Expression ze = Expression::constant(z);
  std::map<std::string, Expression> out;
  out.emplace("J-", sum_range(0, N, [&](int i) { return q(i) * q(i); }));
  out.emplace("J+", sum_range(0, N, [&](int i) {
                const Expression q2 = q(i) * q(i);
                const Expression sc = sinhc(ze * q2);
                Expression site = sc * p(i) * p(i);
                if (b[i] != 0.0) site = site + Expression::constant(b[i]) / (q2 * sc);
                return site * site_weight(i, N, z);
              }));
  out.emplace("J3", sum_range(0, N, [&](int i) {
                const Expression q2 = q(i) * q(i);
                return sinhc(ze * q2) * q(i) * p(i) * site_weight(i, N, z);
              }));
  return out;
}

std::map<std::string, Expression> h6_realized(int N, const std::vector<double>& lambda) {
  check_len(N, lambda.size(), "h6_realized lambda");
  for (double l : lambda)
    if (l == 0.0)
      throw DomainError("h6_realized: lambda entries must be non-vanishing");
  auto q = [](int i) { return Expression::q(i); };
  auto p = [](int i) { return Expression::p(i); };
  double lam2 = 0.0;
  for (double l : lambda) lam2 += l * l;
  std::map<std::string, Expression> out;
  out.emplace("A+", sum_range(0, N, [&](int i) { return Expression::constant(lambda[i]) * p(i); }));
  out.emplace("A-", sum_range(0, N, [&](int i) { return Expression::constant(lambda[i]) * q(i); }));
  out.emplace("M", Expression::constant(lam2));
  out.emplace("B+", sum_range(0, N, [&](int i) { return p(i) * p(i); }));
  out.emplace("B-", sum_range(0, N, [&](int i) { return q(i) * q(i); }));
  out.emplace("K", sum_range(0, N, [&](int i) { return q(i) * p(i); }) -
                       Expression::constant(lam2 / 2.0));
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form integral families

std::vector<MotionIntegral> sl2_integrals(int N, const std::vector<double>& b) {
  if (N < 2) throw DomainError("sl2_integrals: N must be >= 2");
  check_len(N, b.size(), "sl2_integrals b");
  auto q = [](int i) { return Expression::q(i); };
  auto p = [](int i) { return Expression::p(i); };
  auto I = [&](int i, int j) {
    Expression t = pow(q(i) * p(j) - q(j) * p(i), 2.0);
    if (b[i] != 0.0)
      t = t + Expression::constant(b[i]) * q(j) * q(j) / (q(i) * q(i));
    if (b[j] != 0.0)
      t = t + Expression::constant(b[j]) * q(i) * q(i) / (q(j) * q(j));
    return t;
  };
  std::vector<MotionIntegral> out;
  for (int m = 2; m <= N; ++m) {
    Expression left = 0.0, right = 0.0;
    double bl = 0.0, br = 0.0;
    const int lo = N - m;
    for (int i = 0; i < m; ++i) {
      bl += b[i];
      for (int j = i + 1; j < m; ++j) left = left + I(i, j);
    }
    for (int i = lo; i < N; ++i) {
      br += b[i];
      for (int j = i + 1; j < N; ++j) right = right + I(i, j);
    }
    out.push_back({"C^(" + std::to_string(m) + ")", 0, m, Side::Left,
                   left + Expression::constant(bl)});
    out.push_back({"C_(" + std::to_string(m) + ")", 0, m, Side::Right,
                   right + Expression::constant(br)});
  }
  return out;
}

std::vector<MotionIntegral> sl2z_integrals(int N, const std::vector<double>& b, double z) {
  if (N < 2) throw DomainError("sl2z_integrals: N must be >= 2");
  check_len(N, b.size(), "sl2z_integrals b");
  auto q = [](int i) { return Expression::q(i); };
  auto p = [](int i) { return Expression::p(i); };
  const Expression ze = Expression::constant(z);
  auto q2 = [&](int i) { return q(i) * q(i); };
  // sinh(z q_i^2) written q_i^2 z sinhc(z q_i^2) keeps the z -> 0 limit exact;
  // ratios of two of them drop the z factor.
  auto sinh_ratio = [&](int i, int j) {
    return (q2(i) * sinhc(ze * q2(i))) / (q2(j) * sinhc(ze * q2(j)));
  };
  auto Iz = [&](int i, int j) {
    Expression t = sinhc(ze * q2(i)) * sinhc(ze * q2(j)) *
                   pow(q(i) * p(j) - q(j) * p(i), 2.0);
    if (b[i] != 0.0) t = t + Expression::constant(b[i]) * sinh_ratio(j, i);
    if (b[j] != 0.0) t = t + Expression::constant(b[j]) * sinh_ratio(i, j);
    return t;
  };
  // exp{-2z sum_{lo<=k<i} q_k^2 - z q_i^2 + z q_j^2 + 2z sum_{j<l<hi} q_l^2}
  auto pair_weight = [&](int lo, int i, int j, int hi) {
    Expression arg = 0.0;
    for (int k = lo; k < i; ++k) arg = arg - 2.0 * ze * q2(k);
    arg = arg - ze * q2(i) + ze * q2(j);
    for (int l = j + 1; l < hi; ++l) arg = arg + 2.0 * ze * q2(l);
    return exp(arg);
  };
  auto b_weight = [&](int lo, int i, int hi) {
    Expression arg = 0.0;
    for (int k = lo; k < i; ++k) arg = arg - 2.0 * ze * q2(k);
    for (int l = i + 1; l < hi; ++l) arg = arg + 2.0 * ze * q2(l);
    return exp(arg);
  };
  auto block = [&](int lo, int hi) {
    Expression s = 0.0;
    for (int i = lo; i < hi; ++i)
      for (int j = i + 1; j < hi; ++j) s = s + Iz(i, j) * pair_weight(lo, i, j, hi);
    for (int i = lo; i < hi; ++i)
      if (b[i] != 0.0)
        s = s + Expression::constant(b[i]) * b_weight(lo, i, hi);
    return s;
  };
  std::vector<MotionIntegral> out;
  for (int m = 2; m <= N; ++m) {
    out.push_back({"C^(" + std::to_string(m) + ")", 0, m, Side::Left, block(0, m)});
    out.push_back({"C_(" + std::to_string(m) + ")", 0, m, Side::Right, block(N - m, N)});
  }
  return out;
}

H6Integrals h6_integrals(int N, const std::vector<double>& lambda) {
  check_len(N, lambda.size(), "h6_integrals lambda");
  for (double l : lambda)
    if (l == 0.0)
      throw DomainError("h6_integrals: lambda entries must be non-vanishing");
  H6Integrals out;
  if (N < 3) {
    out.warning = "h6 integrals vanish identically for N < 3";
    return out;
  }
  auto q = [](int i) { return Expression::q(i); };
  auto p = [](int i) { return Expression::p(i); };
  auto triple = [&](int i, int j, int k) {
    auto l = [&](int a) { return Expression::constant(lambda[a]); };
    Expression t = l(i) * (p(j) * q(k) - p(k) * q(j)) + l(j) * (p(k) * q(i) - p(i) * q(k)) +
                   l(k) * (p(i) * q(j) - p(j) * q(i));
    return t * t;
  };
  auto block = [&](int lo, int hi) {
    Expression s = 0.0;
    for (int i = lo; i < hi; ++i)
      for (int j = i + 1; j < hi; ++j)
        for (int k = j + 1; k < hi; ++k) s = s + triple(i, j, k);
    return s;
  };
  // left m = 3..N, right m = 3..N-1: C^(N) = C_(N) is counted once => 2N-5
  for (int m = 3; m <= N; ++m)
    out.integrals.push_back({"C^(" + std::to_string(m) + ")", 1, m, Side::Left, block(0, m)});
  for (int m = 3; m <= N - 1; ++m)
    out.integrals.push_back(
        {"C_(" + std::to_string(m) + ")", 1, m, Side::Right, block(N - m, N)});
  return out;
}

Expression h6_casimir_c2() {
  Expression M = Expression::placeholder("M"), K = Expression::placeholder("K");
  Expression Ap = Expression::placeholder("A+"), Am = Expression::placeholder("A-");
  Expression Bp = Expression::placeholder("B+"), Bm = Expression::placeholder("B-");
  return (M * Bp - Ap * Ap) * (M * Bm - Am * Am) - pow(M * K - Am * Ap + M * M / 2.0, 2.0);
}

GeneratorFamily h6_generator_families(const std::string& X) {
  Expression M = Expression::placeholder("M"), K = Expression::placeholder("K");
  Expression Ap = Expression::placeholder("A+"), Am = Expression::placeholder("A-");
  Expression Bp = Expression::placeholder("B+"), Bm = Expression::placeholder("B-");
  const Subalgebra h3{"h3", {"A-", "A+", "M"}, M, false};  // only the linear centre
  const Subalgebra h4{"h4", {"K", "A-", "A+", "M"}, M * K - Ap * Am, true};
  const Subalgebra gl2{"gl2", {"B-", "B+", "K", "M"},
                       Bm * Bp - pow(K + M / 2.0, 2.0), true};
  GeneratorFamily f;
  f.generator = X;
  if (X == "K") {
    f.commuting = {"M"};
    f.subalgebras = {h4, gl2};
  } else if (X == "A+") {
    f.commuting = {"B+", "M"};
    f.subalgebras = {h3, h4};
  } else if (X == "A-") {
    f.commuting = {"B-", "M"};
    f.subalgebras = {h3, h4};
  } else if (X == "B+") {
    f.commuting = {"A+", "M"};
    f.subalgebras = {gl2};
  } else if (X == "B-") {
    f.commuting = {"A-", "M"};
    f.subalgebras = {gl2};
  } else if (X == "M") {
    throw UnresolvedSymbol("M is central: every Hamiltonian commutes with it");
  } else {
    throw UnresolvedSymbol("unknown h6 generator '" + X + "'");
  }
  return f;
}

}  // namespace algebras
}  // namespace coalg
