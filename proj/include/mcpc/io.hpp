#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mcpc/code_model.hpp"

namespace mcpc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Symbols render as 0-9 then a-z, so text formats cap q_i at 36.
constexpr std::uint32_t kMaxTextAlphabet = 36;

char symbol_char(Symbol s);
/// "-" for epsilon.
std::string component_text(const Component& c);
Component parse_component(std::string_view text, std::uint32_t q);
/// Components separated by '|', e.g. "0|-|10".
Word parse_word(std::string_view text, const ChannelSpec& spec);
std::string word_text(const Word& w);

/// channels: q_0 ... q_{n-1}
/// codeword: s_0 | ... | s_{n-1}
/// '#' starts a comment; blank lines are ignored.
Codebook parse_codebook(std::string_view text);
std::string print_codebook(const Codebook& cb);

/// p: num/den   (one line per probability)
ProbMultiset parse_probs(std::string_view text);
std::string print_probs(const ProbMultiset& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mcpc
