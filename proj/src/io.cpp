#include "mcpc/io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace mcpc {

namespace {

std::string_view strip(std::string_view s) {
  auto hash = s.find('#');
  if (hash != std::string_view::npos) s = s.substr(0, hash);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(strip(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

int symbol_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

// Splits "key: value", returning false when the key does not match.
bool keyed(std::string_view line, std::string_view key, std::string_view& value) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ':') return false;
  value = strip(line.substr(key.size() + 1));
  return true;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t number = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto line = strip(text.substr(start, end - start));
    if (!line.empty()) fn(number, line);
    start = end + 1;
  }
}

BigInt parse_integer(std::string_view s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return BigInt(std::string(s));
}

}  // namespace

char symbol_char(Symbol s) {
  if (s >= kMaxTextAlphabet) throw std::invalid_argument("symbol has no text form");
  return static_cast<char>(s < 10 ? '0' + s : 'a' + (s - 10));
}

std::string component_text(const Component& c) {
  if (c.empty()) return "-";
  std::string out;
  for (Symbol s : c) out += symbol_char(s);
  return out;
}

Component parse_component(std::string_view text, std::uint32_t q) {
  if (text == "-") return {};
  if (text.empty()) throw std::invalid_argument("empty component; write '-' for epsilon");
  Component c;
  for (char ch : text) {
    int v = symbol_value(ch);
    if (v < 0) throw std::invalid_argument(std::string("bad symbol '") + ch + "'");
    if (static_cast<std::uint32_t>(v) >= q) {
      throw std::invalid_argument(std::string("symbol '") + ch + "' out of range for q = " + std::to_string(q));
    }
    c.push_back(static_cast<Symbol>(v));
  }
  return c;
}

Word parse_word(std::string_view text, const ChannelSpec& spec) {
  auto parts = split(text, '|');
  if (parts.size() != spec.n()) {
    throw std::invalid_argument("expected " + std::to_string(spec.n()) + " components, got " +
                                std::to_string(parts.size()));
  }
  std::vector<Component> comps;
  for (std::size_t i = 0; i < parts.size(); ++i) comps.push_back(parse_component(parts[i], spec[i]));
  return Word(std::move(comps));
}

std::string word_text(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.n(); ++i) {
    if (i) out += " | ";
    out += component_text(w[i]);
  }
  return out;
}

Codebook parse_codebook(std::string_view text) {
  std::optional<ChannelSpec> spec;
  std::vector<Word> words;
  std::size_t last_line = 0;
  for_each_line(text, [&](std::size_t number, std::string_view line) {
    last_line = number;
    std::string_view value;
    if (keyed(line, "channels", value)) {
      if (spec) throw ParseError(number, "duplicate channels header");
      std::vector<std::uint32_t> sizes;
      std::istringstream is{std::string(value)};
      std::string tok;
      while (is >> tok) {
        BigInt q = parse_integer(tok, number);
        if (q < 2 || q > kMaxTextAlphabet) throw ParseError(number, "channel size must lie in [2, 36]");
        sizes.push_back(static_cast<std::uint32_t>(q.get_ui()));
      }
      if (sizes.empty()) throw ParseError(number, "channels header lists no sizes");
      spec.emplace(std::move(sizes));
    } else if (keyed(line, "codeword", value)) {
      if (!spec) throw ParseError(number, "codeword before channels header");
      try {
        words.push_back(parse_word(value, *spec));
      } catch (const std::invalid_argument& e) {
        throw ParseError(number, e.what());
      }
    } else {
      throw ParseError(number, "expected 'channels:' or 'codeword:'");
    }
  });
  if (!spec) throw ParseError(last_line, "missing channels header");
  try {
    return Codebook(*spec, std::move(words));
  } catch (const std::invalid_argument& e) {
    throw ParseError(last_line, e.what());
  }
}

std::string print_codebook(const Codebook& cb) {
  std::string out = "channels:";
  for (auto q : cb.spec().sizes()) out += " " + std::to_string(q);
  out += "\n";
  for (const auto& w : cb.codewords()) out += "codeword: " + word_text(w) + "\n";
  return out;
}

ProbMultiset parse_probs(std::string_view text) {
  std::vector<Rational> probs;
  std::size_t last_line = 0;
  for_each_line(text, [&](std::size_t number, std::string_view line) {
    last_line = number;
    std::string_view value;
    if (!keyed(line, "p", value)) throw ParseError(number, "expected 'p: num/den'");
    auto slash = value.find('/');
    BigInt num = parse_integer(strip(value.substr(0, slash)), number);
    BigInt den = slash == std::string_view::npos ? BigInt(1) : parse_integer(strip(value.substr(slash + 1)), number);
    if (den == 0) throw ParseError(number, "zero denominator");
    probs.push_back(make_rational(num, den));
  });
  try {
    return ProbMultiset(std::move(probs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(last_line, e.what());
  }
}

std::string print_probs(const ProbMultiset& p) {
  std::string out;
  for (const auto& v : p.values()) out += "p: " + v.get_num().get_str() + "/" + v.get_den().get_str() + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace mcpc
