#include "calabi_lab/space_parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <map>
#include <set>

#include "calabi_lab/errors.hpp"

namespace calab {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  SpaceDescriptor parse_top() {
    SpaceDescriptor d = parse_space_at();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return d;
  }

 private:
  struct Value {
    std::string text;
    std::size_t at;      // offset of the value
    std::size_t key_at;  // offset of its key
  };

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) throw ParseError("expected a name", start);
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  SpaceDescriptor parse_space_at() {
    skip_ws();
    const std::size_t name_at = pos_;
    const std::string name = ident();
    expect(':');
    if (name == "file") {
      skip_ws();
      const std::size_t start = pos_;
      // A file path runs to the end, or to the closing separator inside a product.
      while (pos_ < s_.size() && (depth_ == 0 || (s_[pos_] != ';' && s_[pos_] != ']'))) ++pos_;
      std::string path = s_.substr(start, pos_ - start);
      while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back()))) path.pop_back();
      if (path.empty()) throw ParseError("file: needs a path", start);
      return SpaceDescriptor{FileSpace{path}};
    }
    if (name == "product") {
      expect('[');
      ++depth_;
      ProductSpace prod;
      prod.factors.push_back(parse_space_at());
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] == ';') {
        ++pos_;
        prod.factors.push_back(parse_space_at());
        skip_ws();
      }
      expect(']');
      --depth_;
      return SpaceDescriptor{std::move(prod)};
    }
    const auto args = parse_args();
    auto get_int = [&](const char* key, std::optional<long long> def, long long lo, long long hi) -> long long {
      auto it = args.find(key);
      if (it == args.end()) {
        if (!def) throw ParseError(name + " needs '" + key + "'", name_at);
        return *def;
      }
      long long v = 0;
      const auto& t = it->second.text;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size()) throw ParseError(std::string("'") + key + "' must be an integer", it->second.at);
      if (v < lo || v > hi)
        throw ParseError(std::string("'") + key + "' out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                         it->second.at);
      return v;
    };
    auto get_seed = [&](const char* key) -> std::uint64_t {
      auto it = args.find(key);
      if (it == args.end()) return 0;
      std::uint64_t v = 0;
      const auto& t = it->second.text;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size()) throw ParseError(std::string("'") + key + "' must be an unsigned integer", it->second.at);
      return v;
    };
    auto get_real = [&](const char* key, double def) -> double {
      auto it = args.find(key);
      if (it == args.end()) return def;
      try {
        std::size_t used = 0;
        const double v = std::stod(it->second.text, &used);
        if (used != it->second.text.size()) throw std::invalid_argument("junk");
        return v;
      } catch (const std::exception&) {
        throw ParseError(std::string("'") + key + "' must be a number", it->second.at);
      }
    };
    auto allow = [&](std::set<std::string> keys) {
      for (const auto& [k, v] : args)
        if (!keys.count(k)) throw ParseError("unknown key '" + k + "' for " + name, v.key_at);
    };
    constexpr long long kMaxN = 16;
    if (name == "chsc") {
      allow({"n", "c"});
      return SpaceDescriptor{ChscSpace{static_cast<int>(get_int("n", std::nullopt, 1, kMaxN)), get_real("c", 1.0)}};
    }
    if (name == "quadric") {
      allow({"n", "scale"});
      return SpaceDescriptor{QuadricSpace{static_cast<int>(get_int("n", std::nullopt, 1, kMaxN)), get_real("scale", 1.0)}};
    }
    if (name == "flat") {
      allow({"k"});
      return SpaceDescriptor{FlatSpace{static_cast<int>(get_int("k", std::nullopt, 1, kMaxN))}};
    }
    if (name == "random") {
      allow({"n", "seed"});
      return SpaceDescriptor{RandomKaehlerSpace{static_cast<int>(get_int("n", std::nullopt, 1, kMaxN)), get_seed("seed")}};
    }
    if (name == "random-ke") {
      allow({"n", "seed"});
      return SpaceDescriptor{
          RandomKaehlerEinsteinSpace{static_cast<int>(get_int("n", std::nullopt, 1, kMaxN)), get_seed("seed")}};
    }
    throw ParseError("unknown space '" + name + "'", name_at);
  }

  std::map<std::string, Value> parse_args() {
    std::map<std::string, Value> out;
    while (true) {
      skip_ws();
      const std::size_t key_at = pos_;
      const std::string key = ident();
      expect('=');
      skip_ws();
      const std::size_t vstart = pos_;
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ';' && s_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      if (vstart == pos_) throw ParseError("missing value for '" + key + "'", vstart);
      if (out.count(key)) throw ParseError("duplicate key '" + key + "'", key_at);
      out[key] = Value{s_.substr(vstart, pos_ - vstart), vstart, key_at};
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      return out;
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

SpaceDescriptor parse_space(const std::string& text) { return Parser(text).parse_top(); }

}  // namespace calab
