#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace liereduce::testing {

/// Random manifest text over the whole grammar.
class ManifestGenerator {
 public:
  explicit ManifestGenerator(std::uint32_t seed) : rng_(seed) {}

  std::string generate() {
    std::ostringstream o;
    n_ = pick(1, 3);
    m_ = pick(1, 3);
    x_ = names("x", n_);
    u_ = names("u", m_);
    params_ = names("c", static_cast<std::size_t>(pick(0, 2)));
    o << "indep " << join(x_, " ") << ";\n";
    o << "dep " << join(u_, " ") << ";\n";
    if (!params_.empty()) o << "param " << join(params_, " ") << ";\n";
    fns_.clear();
    for (int k = pick(0, 2); k > 0; --k) {
      std::string f = "g" + std::to_string(fns_.size() + 1);
      fns_.push_back(f);
      o << "fn " << f << "(" << join(u_, ", ") << ");\n";
    }
    std::vector<std::string> fields, maps, specs, eqs, invs;
    for (int k = pick(1, 3); k > 0; --k) {
      std::string name = pick(0, 1) ? "E" + std::to_string(eqs.size() + 1) : "";
      o << "eq " << (name.empty() ? "" : name + ": ") << derivative() << " + " << equation_body() << " = "
        << coordinate_expr() << ";\n";
      eqs.push_back(name);
    }
    for (int k = pick(0, 3); k > 0; --k) {
      std::string name = "X" + std::to_string(fields.size() + 1);
      fields.push_back(name);
      o << "field " << name << " = [";
      std::vector<std::string> comps;
      for (std::size_t i = 0; i < n_; ++i)
        if (pick(0, 1)) comps.push_back(x_[i] + ": " + coordinate_expr());
      for (std::size_t a = 0; a < m_; ++a)
        if (pick(0, 2) == 0) comps.push_back(u_[a] + ": " + coordinate_expr());
      o << join(comps, ", ") << "];\n";
    }
    if (pick(0, 1)) {
      invs.push_back("W");
      o << "invariants W = [" << join(u_, ", ") << ", " << coordinate_expr() << "];\n";
    }
    if (pick(0, 1)) {
      std::vector<std::string> f;
      for (std::size_t i = 0; i < n_; ++i) f.push_back(u_expr());
      maps.push_back("A");
      o << "map A = affine(" << join(f, ", ") << ")";
      if (pick(0, 1)) o << " -> (" << join(names("s", n_), ", ") << "; " << join(names("v", m_), ", ") << ")";
      o << ";\n";
    }
    if (n_ == 2 && m_ == 2 && pick(0, 1)) {
      maps.push_back("H");
      o << "map H = hodograph;\n";
    }
    if (pick(0, 1)) {
      // Shear w1 = u1 + k x1: inverse u1 = w1 - k z1.
      int k = pick(-3, 3);
      std::vector<std::string> W = u_, U = names("w", m_);
      W[0] = u_[0] + " + (" + std::to_string(k) + ")*" + x_[0];
      U[0] = "w1 - (" + std::to_string(k) + ")*z1";
      maps.push_back("P");
      o << "map P = point(" << join(x_, ", ") << "; " << join(W, ", ") << ") inverse(" << join(names("z", n_), ", ")
        << "; " << join(U, ", ") << ");\n";
    }
    if (pick(0, 1)) {
      specs.push_back("S");
      o << "ma S (2, 2) = [";
      for (int r = pick(1, 2); r > 0; --r) {
        std::vector<std::string> row;
        for (int j = 0; j < 6; ++j) row.push_back(std::to_string(pick(-9, 9)));
        o << "[" << join(row, ", ") << "]" << (r > 1 ? ", " : "");
      }
      o << "]";
      if (pick(0, 1)) o << " f(u1, 2*u2 - u1)";
      o << ";\n";
    }
    o << "run classify;\n";
    for (const auto& f : fields) o << "run check-symmetry " << f << ";\n";
    for (const auto& m : maps) o << "run transform " << m << ";\n";
    for (const auto& s : specs) o << "run reduce-ma " << s << ";\n";
    if (fields.size() >= 2) o << "run check-structure " << join(fields, " ") << (invs.empty() ? "" : " W") << ";\n";
    if (pick(0, 3) == 0) o << "run reproduce curvature;\n";
    return o.str();
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  static std::vector<std::string> names(const std::string& prefix, std::size_t k) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }

  static std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
  }

  std::string atom() {
    std::vector<std::string> pool = x_;
    pool.insert(pool.end(), u_.begin(), u_.end());
    pool.insert(pool.end(), params_.begin(), params_.end());
    pool.insert(pool.end(), fns_.begin(), fns_.end());
    for (const auto& f : fns_) pool.push_back("d(" + f + "," + u_[0] + ")");
    pool.push_back(std::to_string(pick(1, 9)));
    return pool[static_cast<std::size_t>(pick(0, static_cast<int>(pool.size()) - 1))];
  }

  std::string u_expr() {
    return std::to_string(pick(-4, 4)) + "*" + u_[static_cast<std::size_t>(pick(0, static_cast<int>(m_) - 1))];
  }

  std::string coordinate_expr() {
    switch (pick(0, 3)) {
      case 0:
        return atom();
      case 1:
        return atom() + "*" + atom() + " - " + std::to_string(pick(1, 5));
      case 2:
        return "(" + atom() + " + " + atom() + ")^" + std::to_string(pick(1, 3));
      default:
        return atom() + "/(1 + " + atom() + "^2)";
    }
  }

  std::string derivative() {
    return "d(" + u_[static_cast<std::size_t>(pick(0, static_cast<int>(m_) - 1))] + "," +
           x_[static_cast<std::size_t>(pick(0, static_cast<int>(n_) - 1))] + ")";
  }

  std::string equation_body() {
    std::string out = "(" + coordinate_expr() + ")*" + derivative();
    if (pick(0, 1)) out += "^" + std::to_string(pick(2, 3));
    if (pick(0, 1)) out += " - " + derivative() + "*" + derivative();
    return out;
  }

  std::mt19937 rng_;
  std::size_t n_ = 1, m_ = 1;
  std::vector<std::string> x_, u_, params_, fns_;
};

}  // namespace liereduce::testing
