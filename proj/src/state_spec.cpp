#include "bellviol/state_spec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "bellviol/errors.hpp"

namespace bellviol {

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  DensityMatrix parse_all() {
    DensityMatrix rho = parse_spec();
    if (pos_ != text_.size()) fail("unexpected trailing text");
    return rho;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("state spec: " + what + " at position " + std::to_string(pos_));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    if (pos_ == start) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  std::string_view value_token() {
    const std::size_t start = pos_;
    while (!at_end() && peek() != ',' && peek() != ')') ++pos_;
    if (pos_ == start) fail("expected a value");
    return text_.substr(start, pos_ - start);
  }

  double number() {
    const std::size_t start = pos_;
    const std::string_view tok = value_token();
    double v = 0.0;
    const char* first = tok.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      pos_ = start;
      fail("invalid number '" + std::string(tok) + "'");
    }
    return v;
  }

  int integer() {
    const std::size_t start = pos_;
    const std::string_view tok = value_token();
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      pos_ = start;
      fail("invalid integer '" + std::string(tok) + "'");
    }
    return v;
  }

  // True when the text at pos_ is ",<key>=" for a key this spec still
  // expects; consumes the comma in that case.
  bool next_key_is(std::initializer_list<std::string_view> keys) {
    if (peek() != ',') return false;
    const std::size_t eq = text_.find('=', pos_ + 1);
    if (eq == std::string_view::npos) return false;
    const std::string_view key = text_.substr(pos_ + 1, eq - pos_ - 1);
    for (auto k : keys)
      if (k == key) {
        ++pos_;
        return true;
      }
    return false;
  }

  void key(std::string_view want) {
    const std::size_t start = pos_;
    const std::string_view got = identifier();
    if (got != want) {
      pos_ = start;
      fail("expected key '" + std::string(want) + "'");
    }
    expect('=');
  }

  static void check_qubits(int n, int min, int max) {
    if (n < min || n > max)
      throw ValidationError("parameter", "qubit count " + std::to_string(n) + " outside " + std::to_string(min) +
                                             ".." + std::to_string(max));
  }

  static void check_weight(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("parameter", "mixing weight must lie in [0, 1]");
  }

  DensityMatrix parse_spec() {
    if (peek() == '(') {
      ++pos_;
      DensityMatrix rho = parse_spec();
      expect(')');
      return rho;
    }
    const std::size_t name_pos = pos_;
    const std::string_view name = identifier();
    expect(':');
    if (name == "ghz") {
      key("n");
      const int n = integer();
      double alpha = std::numbers::pi / 4;
      if (next_key_is({"alpha"})) {
        key("alpha");
        alpha = number();
      }
      check_qubits(n, 2, 10);
      if (!std::isfinite(alpha)) throw ValidationError("parameter", "alpha must be finite");
      return make_generalized_ghz(n, alpha);
    }
    if (name == "w") {
      key("n");
      const int n = integer();
      check_qubits(n, 2, 10);
      return make_w(n);
    }
    if (name == "w4noise") {
      key("x");
      const double x = number();
      check_weight(x);
      const WeightedState parts[] = {{x, maximally_mixed(4)}, {1.0 - x, make_w(4)}};
      return mix(parts);
    }
    if (name == "mixed") {
      key("x");
      const double x = number();
      if (!next_key_is({"a"})) fail("expected ',a='");
      key("a");
      DensityMatrix a = parse_spec();
      if (!next_key_is({"b"})) fail("expected ',b='");
      key("b");
      DensityMatrix b = parse_spec();
      check_weight(x);
      if (a.n_qubits() != b.n_qubits())
        throw ValidationError("parameter", "mixed components differ in qubit count");
      const WeightedState parts[] = {{x, std::move(a)}, {1.0 - x, std::move(b)}};
      return mix(parts);
    }
    if (name == "file") {
      const std::string path(value_token());
      return load_density(path);
    }
    pos_ = name_pos;
    fail("unknown state kind '" + std::string(name) + "'");
  }
};

}  // namespace

DensityMatrix parse_state_spec(std::string_view text) { return SpecParser(text).parse_all(); }

}  // namespace bellviol
