#include "selfsim/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <regex>
#include <sstream>

#include "selfsim/errors.hpp"

namespace selfsim::config {

namespace {

using algebra::Rational;

struct Number {
  double value = 0;
  std::optional<Rational> exact;
};

Number parse_number(const std::string& tok, int line) {
  static const std::regex int_frac(R"(([+-]?\d+)(?:/(\d+))?)");
  std::smatch m;
  Number n;
  if (std::regex_match(tok, m, int_frac)) {
    algebra::BigInt p(m[1].str());
    algebra::BigInt q = m[2].matched ? algebra::BigInt(m[2].str()) : algebra::BigInt(1);
    if (q == 0) throw ParseError(line, "zero denominator in '" + tok + "'");
    n.exact = Rational(p, q);
    n.value = n.exact->convert_to<double>();
    return n;
  }
  auto slash = tok.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      n.value = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } else {
      std::size_t u2 = 0;
      double a = std::stod(tok.substr(0, slash), &used);
      double b = std::stod(tok.substr(slash + 1), &u2);
      if (used != slash || u2 != tok.size() - slash - 1 || b == 0) throw std::invalid_argument(tok);
      n.value = a / b;
    }
  } catch (const std::logic_error&) {
    throw ParseError(line, "not a number: '" + tok + "'");
  }
  if (!std::isfinite(n.value)) throw ParseError(line, "number out of range: '" + tok + "'");
  return n;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::vector<double> numbers(const std::vector<std::string>& tok, std::size_t from, int line) {
  std::vector<double> out;
  for (std::size_t i = from; i < tok.size(); ++i) out.push_back(parse_number(tok[i], line).value);
  return out;
}

// Snap entries within a few ulps of 0 or +-1 so that angles like pi/2 give exact permutation matrices.
double snap(double x) {
  for (double t : {-1.0, 0.0, 1.0})
    if (std::abs(x - t) < 4 * std::numeric_limits<double>::epsilon()) return t;
  return x;
}

ifs::Mat planar_rotation(double angle) {
  ifs::Mat R(2, 2);
  const double c = snap(std::cos(angle)), s = snap(std::sin(angle));
  R << c, -s, s, c;
  return R;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tok) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      tok = tokens(raw);
      if (!tok.empty()) return true;
    }
    return false;
  }
  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

ifs::Mat read_rows(Reader& r, int rows, int cols, const std::string& what) {
  ifs::Mat M(rows, cols);
  std::vector<std::string> tok;
  for (int i = 0; i < rows; ++i) {
    if (!r.next(tok)) throw ParseError(r.line(), "unexpected end of file in " + what);
    auto v = numbers(tok, 0, r.line());
    if (static_cast<int>(v.size()) != cols)
      throw ParseError(r.line(), what + " row needs " + std::to_string(cols) + " entries");
    for (int j = 0; j < cols; ++j) M(i, j) = v[j];
  }
  return M;
}

}  // namespace

SystemConfig parse_config(std::istream& in) {
  SystemConfig cfg;
  Reader r(in);
  std::vector<std::string> tok;
  std::optional<std::vector<Number>> weights;
  int weights_line = 0;

  auto need_dim = [&]() {
    if (cfg.dimension <= 0) throw ParseError(r.line(), "'dimension' must come first");
  };

  while (r.next(tok)) {
    const std::string& key = tok[0];
    if (key == "name") {
      cfg.name = tok.size() > 1 ? tok[1] : "";
    } else if (key == "dimension") {
      if (tok.size() != 2) throw ParseError(r.line(), "usage: dimension <d>");
      auto n = parse_number(tok[1], r.line());
      if (!n.exact || n.value < 1 || n.value != std::floor(n.value))
        throw ParseError(r.line(), "dimension must be a positive integer");
      if (cfg.dimension != 0) throw ParseError(r.line(), "dimension given twice");
      cfg.dimension = static_cast<int>(n.value);
    } else if (key == "map") {
      need_dim();
      const int d = cfg.dimension;
      const int start = r.line();
      std::optional<double> ratio;
      std::optional<ifs::Mat> rot;
      std::optional<ifs::Vec> trans;
      bool closed = false;
      while (r.next(tok)) {
        const std::string& k = tok[0];
        if (k == "end") {
          closed = true;
          break;
        }
        if (k == "ratio") {
          if (tok.size() != 2) throw ParseError(r.line(), "usage: ratio <r>");
          ratio = parse_number(tok[1], r.line()).value;
        } else if (k == "translation") {
          auto v = numbers(tok, 1, r.line());
          if (static_cast<int>(v.size()) != d)
            throw ParseError(r.line(), "translation needs " + std::to_string(d) + " entries");
          trans = Eigen::Map<ifs::Vec>(v.data(), d);
        } else if (k == "angle" || k == "angle_pi") {
          if (d != 2) throw ParseError(r.line(), "angles are only accepted in dimension 2");
          if (tok.size() != 2) throw ParseError(r.line(), "usage: " + k + " <value>");
          double a = parse_number(tok[1], r.line()).value;
          rot = planar_rotation(k == "angle" ? a : a * M_PI);
        } else if (k == "rotation") {
          if (tok.size() != 1) throw ParseError(r.line(), "rotation rows go on the following lines");
          rot = read_rows(r, d, d, "rotation");
        } else {
          throw ParseError(r.line(), "unknown key '" + k + "' in map block");
        }
      }
      if (!closed) throw ParseError(r.line(), "map block opened on line " + std::to_string(start) + " has no 'end'");
      if (!ratio) throw ParseError(r.line(), "map block without ratio");
      if (!trans) trans = ifs::Vec::Zero(d);
      if (!rot) rot = ifs::Mat::Identity(d, d);
      try {
        cfg.maps.push_back(ifs::Similarity::make(*ratio, *rot, *trans));
      } catch (const ContractError& e) {
        throw ParseError(r.line(), e.what());
      }
    } else if (key == "weights") {
      weights.emplace();
      weights_line = r.line();
      for (std::size_t i = 1; i < tok.size(); ++i) weights->push_back(parse_number(tok[i], r.line()));
    } else if (key == "pv_hint") {
      std::string rest;
      for (std::size_t i = 1; i < tok.size(); ++i) rest += tok[i] + " ";
      try {
        cfg.pv_hints.push_back(algebra::IntPolynomial::parse(rest));
      } catch (const Error& e) {
        throw ParseError(r.line(), e.what());
      }
    } else if (key == "subspace") {
      need_dim();
      if (tok.size() != 3 || tok[1] != "rows") throw ParseError(r.line(), "usage: subspace rows <k>");
      auto k = parse_number(tok[2], r.line());
      if (!k.exact || k.value < 1 || k.value > cfg.dimension)
        throw ParseError(r.line(), "subspace rank must be between 1 and the dimension");
      ifs::Mat rows = read_rows(r, static_cast<int>(k.value), cfg.dimension, "subspace");
      Eigen::HouseholderQR<ifs::Mat> qr(rows.transpose());
      ifs::Mat Q = qr.householderQ() * ifs::Mat::Identity(cfg.dimension, rows.rows());
      Eigen::JacobiSVD<ifs::Mat> svd(rows);
      if (svd.singularValues().minCoeff() < 1e-12 * svd.singularValues().maxCoeff())
        throw ParseError(r.line(), "subspace rows are linearly dependent");
      cfg.subspace = Q;
    } else {
      throw ParseError(r.line(), "unknown key '" + key + "'");
    }
  }
  if (cfg.dimension <= 0) throw ParseError(r.line(), "missing 'dimension'");
  if (cfg.maps.empty()) throw ParseError(r.line(), "no maps");
  if (!weights) {
    cfg.weights = ifs::ProbabilityVector::uniform(cfg.maps.size());
  } else {
    if (weights->size() != cfg.maps.size())
      throw ParseError(weights_line, "expected " + std::to_string(cfg.maps.size()) + " weights");
    bool exact = true;
    for (const auto& w : *weights) exact = exact && w.exact.has_value();
    try {
      if (exact) {
        std::vector<Rational> q;
        for (const auto& w : *weights) q.push_back(*w.exact);
        cfg.weights = ifs::ProbabilityVector::from_rationals(q);
      } else {
        std::vector<double> v;
        for (const auto& w : *weights) v.push_back(w.value);
        cfg.weights = ifs::ProbabilityVector::from_doubles(v);
      }
    } catch (const ContractError& e) {
      throw ParseError(weights_line, e.what());
    }
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path);
  return parse_config(in);
}

void write_config(std::ostream& out, const SystemConfig& cfg) {
  std::ostringstream s;
  s << std::setprecision(17);
  if (!cfg.name.empty()) s << "name " << cfg.name << "\n";
  s << "dimension " << cfg.dimension << "\n";
  for (const auto& m : cfg.maps) {
    s << "map\n  ratio " << m.ratio << "\n  translation";
    for (Eigen::Index i = 0; i < m.translation.size(); ++i) s << " " << m.translation(i);
    s << "\n";
    if (!m.rotation.isIdentity(0)) {
      s << "  rotation\n";
      for (Eigen::Index r = 0; r < m.rotation.rows(); ++r) {
        s << "   ";
        for (Eigen::Index c = 0; c < m.rotation.cols(); ++c) s << " " << m.rotation(r, c);
        s << "\n";
      }
    }
    s << "end\n";
  }
  s << "weights";
  if (cfg.weights.exact)
    for (const auto& w : *cfg.weights.exact) s << " " << w;
  else
    for (double w : cfg.weights.weights) s << " " << w;
  s << "\n";
  for (const auto& h : cfg.pv_hints) s << "pv_hint " << h.to_string() << "\n";
  if (cfg.subspace) {
    s << "subspace rows " << cfg.subspace->cols() << "\n";
    for (Eigen::Index c = 0; c < cfg.subspace->cols(); ++c) {
      for (Eigen::Index r = 0; r < cfg.subspace->rows(); ++r) s << (r ? " " : "") << (*cfg.subspace)(r, c);
      s << "\n";
    }
  }
  out << s.str();
}

}  // namespace selfsim::config
