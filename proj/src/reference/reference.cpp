#include "liereduce/reference.hpp"

#include "liereduce/parse.hpp"

namespace liereduce::reference {

namespace {

Expr parse_in(const JetContext& ctx, const std::string& text) { return parse_expr(text, {}, &ctx.functions()); }

/// Replaces every "{i}" by the equation index.
std::string with_index(std::string text, std::size_t i) {
  const std::string key = "{i}";
  const std::string value = std::to_string(i);
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

/// Derivative symbol text u_{a,i} in `ctx` (1-based).
std::string d(const JetContext& ctx, std::size_t a, std::size_t i) { return ctx.deriv(a - 1, i - 1).name(); }

/// 2x2 minor text |p(a,i) p(a,j); p(b,i) p(b,j)|.
std::string minor2(const JetContext& ctx, std::size_t a, std::size_t b, std::size_t i, std::size_t j) {
  return "(" + d(ctx, a, i) + "*" + d(ctx, b, j) + " - " + d(ctx, a, j) + "*" + d(ctx, b, i) + ")";
}

std::string k(std::size_t label) { return "k{i}_" + std::to_string(label); }

}  // namespace

// ---------------------------------------------------------------- Example 1

JetContext example1_context() {
  auto S = [](const char* s) { return Symbol::intern(s); };
  std::vector<Symbol> u{S("u1"), S("u2")};
  FunctionTable ft;
  for (int i = 1; i <= 15; ++i) ft.declare(Symbol::intern("k" + std::to_string(i)), u);
  return JetContext({S("x1"), S("x2")}, u, {S("a"), S("b"), S("c")}, ft);
}

std::vector<Expr> example1_equations(const JetContext& ctx) {
  const std::string p11 = d(ctx, 1, 1), p12 = d(ctx, 1, 2), p22 = d(ctx, 2, 2), p21 = d(ctx, 2, 1);
  const std::string A = p11 + "*" + p22, B = p12 + "^2";
  std::string eq2 = "k1*" + p12 + "^4 + (k2*" + A + " + k3*" + B + ")*" + A + " + (k4*" + A + " + k5*" + B + ")*" + p11 +
                    " + (k6*" + A + " + k7*" + B + ")*" + p12 + " + (k8*" + A + " + k9*" + B + ")*" + p22 + " + k10*" +
                    p11 + "^2 + k11*" + p11 + "*" + p12 + " + k12*" + A + " + k13*" + B + " + k14*" + p12 + "*" + p22 +
                    " + k15*" + p22 + "^2";
  return {parse_in(ctx, p12 + " - " + p21), parse_in(ctx, eq2)};
}

std::vector<Expr> example1_conditions(const JetContext& ctx) {
  static const char* text[] = {
      "k1 - c^2*k10 + b*c*k11 - a*c*k12 - b^2*k13 + a*b*k14 - a^2*k15",
      "k2 - c^2*k10 + b*c*k11 - a*c*k12 - b^2*k13 + a*b*k14 - a^2*k15",
      "k3 + 2*(c^2*k10 - b*c*k11 + a*c*k12 + b^2*k13 - a*b*k14 + a^2*k15)",
      "k4 + 2*c*k10 - b*k11 + a*k12",
      "k5 - 2*c*k10 + b*k11 - a*k12",
      "k6 + c*k11 - 2*b*k13 + a*k14",
      "k7 - c*k11 + 2*b*k13 - a*k14",
      "k8 + c*k12 - b*k14 + 2*a*k15",
      "k9 - c*k12 + b*k14 - 2*a*k15",
  };
  std::vector<Expr> out;
  for (const char* t : text) out.push_back(parse_in(ctx, t));
  return out;
}

std::vector<VectorField> example1_fields(const JetContext& ctx) {
  VectorField X3 = VectorField::zero(ctx);
  X3.xi[0] = parse_in(ctx, "x1 - a*u1 - b*u2");
  X3.xi[1] = parse_in(ctx, "x2 - b*u1 - c*u2");
  return {VectorField::translation(ctx, 0), VectorField::translation(ctx, 1), X3};
}

std::vector<Expr> example1_shift(const JetContext& ctx) {
  return {parse_in(ctx, "a*u1 + b*u2"), parse_in(ctx, "b*u1 + c*u2")};
}

std::vector<Expr> example1_target(const JetContext& target) {
  const std::string q11 = d(target, 1, 1), q12 = d(target, 1, 2), q21 = d(target, 2, 1), q22 = d(target, 2, 2);
  std::string eq2 = "k10*" + q11 + "^2 + k11*" + q11 + "*" + q12 + " + k12*" + q11 + "*" + q22 + " + k13*" + q12 +
                    "^2 + k14*" + q12 + "*" + q22 + " + k15*" + q22 + "^2";
  return {parse_in(target, q12 + " - " + q21), parse_in(target, eq2)};
}

std::vector<Expr> kappa_specialization(const Expr& kappa, Symbol w1s, Symbol w2s) {
  const Expr K = kappa, w1(w1s), w2(w2s), one(1);
  return {
      -K * (one + w2 * w2).pow(2),
      Expr(4) * K * w1 * w2 * (one + w2 * w2),
      Expr(2) * ((Expr(2) - K) * (one + w1 * w1 + w2 * w2) - K * w1 * w1 * w2 * w2),
      Expr(-4) * (one + w1 * w1 + w2 * w2 + K * w1 * w1 * w2 * w2),
      Expr(4) * K * w1 * w2 * (one + w1 * w1),
      -K * (one + w1 * w1).pow(2),
  };
}

Expr surface_equation(const Expr& kappa, Symbol w1s, Symbol w2s, Symbol w11s, Symbol w12s, Symbol w22s) {
  const Expr K = kappa, w1(w1s), w2(w2s), w11(w11s), w12(w12s), w22(w22s), one(1);
  return K * (one + w2 * w2).pow(2) * w11 * w11 - Expr(4) * K * w1 * w2 * (one + w2 * w2) * w11 * w12 -
         Expr(2) * ((Expr(2) - K) * (one + w1 * w1 + w2 * w2) - K * w1 * w1 * w2 * w2) * w11 * w22 +
         Expr(4) * (one + w1 * w1 + w2 * w2 + K * w1 * w1 * w2 * w2) * w12 * w12 -
         Expr(4) * K * w1 * w2 * (one + w1 * w1) * w12 * w22 + K * (one + w1 * w1).pow(2) * w22 * w22;
}

// ------------------------------------------------------ Monge–Ampère families

Expr ma_equation(std::size_t m, std::size_t n, std::size_t i, const JetContext& c) {
  std::string t;
  if (m == 2 && n == 2) {
    t = k(0) + "*" + minor2(c, 1, 2, 1, 2) + " + " + k(1) + "*" + d(c, 1, 1) + " + " + k(2) + "*" + d(c, 1, 2) + " + " +
        k(3) + "*" + d(c, 2, 1) + " + " + k(4) + "*" + d(c, 2, 2) + " + " + k(5);
  } else if (m == 2 && n == 3) {
    t = k(1) + "*" + minor2(c, 1, 2, 1, 2) + " + " + k(2) + "*" + minor2(c, 1, 2, 1, 3) + " + " + k(3) + "*" +
        minor2(c, 1, 2, 2, 3);
    std::size_t label = 4;
    for (std::size_t a = 1; a <= 2; ++a)
      for (std::size_t j = 1; j <= 3; ++j) t += " + " + k(label++) + "*" + d(c, a, j);
    t += " + " + k(10);
  } else if (m == 3 && n == 2) {
    t = k(1) + "*" + minor2(c, 1, 2, 1, 2) + " + " + k(2) + "*" + minor2(c, 1, 3, 1, 2) + " + " + k(3) + "*" +
        minor2(c, 2, 3, 1, 2);
    std::size_t label = 4;
    for (std::size_t a = 1; a <= 3; ++a)
      for (std::size_t j = 1; j <= 2; ++j) t += " + " + k(label++) + "*" + d(c, a, j);
    t += " + " + k(10);
  } else if (m == 3 && n == 3) {
    const std::string det = "(" + d(c, 1, 1) + "*" + minor2(c, 2, 3, 2, 3) + " - " + d(c, 1, 2) + "*" +
                            minor2(c, 2, 3, 1, 3) + " + " + d(c, 1, 3) + "*" + minor2(c, 2, 3, 1, 2) + ")";
    const std::string H[9] = {
        minor2(c, 2, 3, 2, 3), minor2(c, 2, 3, 1, 3), minor2(c, 2, 3, 1, 2),  //
        minor2(c, 1, 3, 2, 3), minor2(c, 1, 3, 1, 3), minor2(c, 1, 3, 1, 2),  //
        minor2(c, 1, 2, 2, 3), minor2(c, 1, 2, 1, 3), minor2(c, 1, 2, 1, 2),
    };
    t = k(0) + "*" + det;
    for (std::size_t h = 0; h < 9; ++h) t += " + " + k(h + 1) + "*" + H[h];
    std::size_t label = 10;
    for (std::size_t a = 1; a <= 3; ++a)
      for (std::size_t j = 1; j <= 3; ++j) t += " + " + k(label++) + "*" + d(c, a, j);
    t += " + " + k(19);
  } else {
    throw Error("no reference equation for (m,n) = (" + std::to_string(m) + "," + std::to_string(n) + ")");
  }
  return parse_in(c, with_index(t, i));
}

std::vector<Expr> ma_shift_conditions(std::size_t m, std::size_t n, std::size_t i, const JetContext& c) {
  std::vector<std::string> t;
  if (m == 2 && n == 2) {
    t = {"k{i}_0*(alpha11*alpha22 - alpha12*alpha21) + k{i}_1*alpha11 + k{i}_2*alpha12 + k{i}_3*alpha21 + "
         "k{i}_4*alpha22 + k{i}_5"};
  } else if (m == 2 && n == 3) {
    t = {"k{i}_1*(alpha11*alpha22 - alpha12*alpha21) + k{i}_2*(alpha11*alpha23 - alpha13*alpha21) + "
         "k{i}_3*(alpha12*alpha23 - alpha13*alpha22) + k{i}_4*alpha11 + k{i}_5*alpha12 + k{i}_6*alpha13 + "
         "k{i}_7*alpha21 + k{i}_8*alpha22 + k{i}_9*alpha23 + k{i}_10"};
  } else if (m == 3 && n == 2) {
    t = {"k{i}_1*(alpha11*alpha22 - alpha12*alpha21) + k{i}_2*(alpha11*alpha32 - alpha12*alpha31) + "
         "k{i}_3*(alpha21*alpha32 - alpha22*alpha31) + k{i}_4*alpha11 + k{i}_5*alpha12 + k{i}_6*alpha21 + "
         "k{i}_7*alpha22 + k{i}_8*alpha31 + k{i}_9*alpha32 + k{i}_10"};
  }
  std::vector<Expr> out;
  for (const auto& s : t) out.push_back(parse_in(c, with_index(s, i)));
  return out;
}

std::vector<Expr> ma_constraints(std::size_t m, std::size_t n, std::size_t i, const JetContext& c) {
  auto F = [](int f, int a) { return "d(f" + std::to_string(f) + ",u" + std::to_string(a) + ")"; };
  std::vector<std::string> t;
  if (m == 2 && n == 2) {
    t = {"k{i}_0 + k{i}_1*" + F(2, 2) + " - k{i}_2*" + F(1, 2) + " - k{i}_3*" + F(2, 1) + " + k{i}_4*" + F(1, 1)};
  } else if (m == 2 && n == 3) {
    t = {
        "k{i}_1 + k{i}_4*" + F(2, 2) + " - k{i}_5*" + F(1, 2) + " - k{i}_7*" + F(2, 1) + " + k{i}_8*" + F(1, 1),
        "k{i}_2 + k{i}_4*" + F(3, 2) + " - k{i}_6*" + F(1, 2) + " - k{i}_7*" + F(3, 1) + " + k{i}_9*" + F(1, 1),
        "k{i}_3 + k{i}_5*" + F(3, 2) + " - k{i}_6*" + F(2, 2) + " - k{i}_8*" + F(3, 1) + " + k{i}_9*" + F(2, 1),
    };
  } else if (m == 3 && n == 2) {
    t = {
        "k{i}_1 + k{i}_4*" + F(2, 2) + " - k{i}_5*" + F(1, 2) + " - k{i}_6*" + F(2, 1) + " + k{i}_7*" + F(1, 1),
        "k{i}_2 + k{i}_4*" + F(2, 3) + " - k{i}_5*" + F(1, 3) + " - k{i}_8*" + F(2, 1) + " + k{i}_9*" + F(1, 1),
        "k{i}_3 + k{i}_6*" + F(2, 3) + " - k{i}_7*" + F(1, 3) + " - k{i}_8*" + F(2, 2) + " + k{i}_9*" + F(1, 2),
    };
  } else if (m == 3 && n == 3) {
    auto P = [&](int a, int b, int c2, int d2) { return "(" + F(a, b) + "*" + F(c2, d2); };
    auto M = [&](int a, int b, int c2, int d2, int e, int g, int h, int l) {
      return P(a, b, c2, d2) + " - " + F(e, g) + "*" + F(h, l) + ")";
    };
    t = {
        "k{i}_0 - " + M(2, 2, 3, 3, 2, 3, 3, 2) + "*k{i}_10 - " + M(1, 3, 3, 2, 1, 2, 3, 3) + "*k{i}_11 - " +
            M(1, 2, 2, 3, 1, 3, 2, 2) + "*k{i}_12 - " + M(2, 3, 3, 1, 2, 1, 3, 3) + "*k{i}_13 - " +
            M(1, 1, 3, 3, 1, 3, 3, 1) + "*k{i}_14 - " + M(1, 3, 2, 1, 1, 1, 2, 3) + "*k{i}_15 - " +
            M(2, 1, 3, 2, 2, 2, 3, 1) + "*k{i}_16 - " + M(1, 2, 3, 1, 1, 1, 3, 2) + "*k{i}_17 - " +
            M(1, 1, 2, 2, 1, 2, 2, 1) + "*k{i}_18",
        "k{i}_1 + k{i}_14*" + F(3, 3) + " - k{i}_15*" + F(2, 3) + " - k{i}_17*" + F(3, 2) + " + k{i}_18*" + F(2, 2),
        "k{i}_2 + k{i}_13*" + F(3, 3) + " - k{i}_15*" + F(1, 3) + " - k{i}_16*" + F(3, 2) + " + k{i}_18*" + F(1, 2),
        "k{i}_3 + k{i}_13*" + F(2, 3) + " - k{i}_14*" + F(1, 3) + " - k{i}_16*" + F(2, 2) + " + k{i}_17*" + F(1, 2),
        "k{i}_4 + k{i}_11*" + F(3, 3) + " - k{i}_12*" + F(2, 3) + " - k{i}_17*" + F(3, 1) + " + k{i}_18*" + F(2, 1),
        "k{i}_5 + k{i}_10*" + F(3, 3) + " - k{i}_12*" + F(1, 3) + " - k{i}_16*" + F(3, 1) + " + k{i}_18*" + F(1, 1),
        "k{i}_6 + k{i}_10*" + F(2, 3) + " - k{i}_11*" + F(1, 3) + " - k{i}_16*" + F(2, 1) + " + k{i}_17*" + F(1, 1),
        "k{i}_7 + k{i}_11*" + F(3, 2) + " - k{i}_12*" + F(2, 2) + " - k{i}_14*" + F(3, 1) + " + k{i}_15*" + F(2, 1),
        "k{i}_8 + k{i}_10*" + F(3, 2) + " - k{i}_12*" + F(1, 2) + " - k{i}_13*" + F(3, 1) + " + k{i}_15*" + F(1, 1),
        "k{i}_9 + k{i}_10*" + F(2, 2) + " - k{i}_11*" + F(1, 2) + " - k{i}_13*" + F(2, 1) + " + k{i}_14*" + F(1, 1),
    };
  } else {
    throw Error("no reference constraints for (m,n) = (" + std::to_string(m) + "," + std::to_string(n) + ")");
  }
  std::vector<Expr> out;
  for (const auto& s : t) out.push_back(parse_in(c, with_index(s, i)));
  return out;
}

Expr ma_target(std::size_t m, std::size_t n, std::size_t i, const JetContext& target) {
  std::size_t first = 0;
  if (m == 2 && n == 2) first = 1;
  else if ((m == 2 && n == 3) || (m == 3 && n == 2)) first = 4;
  else if (m == 3 && n == 3) first = 10;
  else throw Error("no reference target for (m,n) = (" + std::to_string(m) + "," + std::to_string(n) + ")");
  std::string t;
  std::size_t label = first;
  for (std::size_t a = 1; a <= m; ++a) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (!t.empty()) t += " + ";
      t += k(label++) + "*" + d(target, a, j);
    }
  }
  return parse_in(target, with_index(t, i));
}

}  // namespace liereduce::reference
