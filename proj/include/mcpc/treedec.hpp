#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcpc/code_model.hpp"
#include "mcpc/rpg.hpp"

namespace mcpc {

/// A class-labelled decoding tree stored as an index arena. An internal node of
/// class i owns exactly q_i child slots, each a node id or kAbsent; a leaf
/// carries the index of the codeword it decodes to.
class DecodingTree {
 public:
  static constexpr std::int32_t kAbsent = -1;

  struct Node {
    std::int32_t channel = -1;  // -1 marks a leaf
    std::size_t codeword = 0;
    std::vector<std::int32_t> children;

    bool is_leaf() const { return channel < 0; }
  };

  std::int32_t add_leaf(std::size_t codeword);
  std::int32_t add_internal(std::size_t channel, std::vector<std::int32_t> children);
  /// Copies `other` into this arena, relabelling leaf j as relabel[j]; returns the copied root.
  std::int32_t graft(const DecodingTree& other, std::span<const std::size_t> relabel);
  void set_root(std::int32_t id) { root_ = id; }

  std::int32_t root() const { return root_; }
  const Node& node(std::int32_t id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t leaf_count() const;

  /// (leaf label, word spelled by its root path), in depth-first slot order.
  std::vector<std::pair<std::size_t, Word>> leaf_words(std::size_t n) const;

  /// Throws std::invalid_argument unless every reachable internal node has a
  /// valid class, q_i slots and at least one child.
  void validate(const ChannelSpec& spec) const;

  /// node := L<index> | _ | (<class> <slot_0> ... <slot_{q-1}>)
  std::string to_sexpr() const;
  static DecodingTree parse(std::string_view text);

  friend bool operator==(const DecodingTree& a, const DecodingTree& b) {
    return a.to_sexpr() == b.to_sexpr();
  }

 private:
  void print(std::int32_t id, std::string& out) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = kAbsent;
};

/// True iff the tree's leaves spell exactly the codewords of `cb`, each once,
/// with leaf label j spelling codeword j.
bool tree_decodes(const DecodingTree& tree, const Codebook& cb);

/// Per channel, the rows whose component on that channel is epsilon.
using EpsilonMap = std::vector<std::vector<std::size_t>>;
EpsilonMap epsilon_locating(const Codebook& cb);

/// True iff every channel has at least one epsilon row. Such a codebook cannot
/// be tree-decoded: no first cut exists.
bool epsilon_blocked(const Codebook& cb);

/// The common per-channel prefix stripped off, then the channels on which every
/// stripped word is epsilon dropped.
struct TrimResult {
  std::vector<Word> words;  // over kept_channels only
  std::vector<std::size_t> kept_channels;
  Word removed_prefix;  // over the original channels
  std::vector<std::size_t> removed_channels;

  /// The trimmed words as a codebook over the kept channels of `original`.
  /// Throws std::invalid_argument when nothing is kept.
  Codebook codebook(const ChannelSpec& original) const;
};

TrimResult trim_words(const std::vector<Word>& words);
TrimResult trim(const Codebook& cb);

/// Certificate of non-tree-decodability: a trimmed sub-codebook reached during
/// the cut search at which no channel admits a complete cut.
struct NotDecodable {
  std::vector<std::size_t> codeword_indices;  // input rows forming the sub-codebook
  TrimResult witness;
};

using TreeDecision = std::variant<DecodingTree, NotDecodable>;

/// Recursive guillotine-cut search: a channel is cuttable when no remaining
/// codeword is epsilon on it; codewords are split by their first symbol there.
/// Channels are tried in ascending order and sub-problems are memoized on the
/// sorted trimmed sub-codebook. Throws std::invalid_argument unless the input
/// is a non-empty prefix code.
TreeDecision decide_tree_decodable(const Codebook& cb);

inline bool is_tree_decodable(const Codebook& cb) {
  return std::holds_alternative<DecodingTree>(decide_tree_decodable(cb));
}

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-channel symbol queues consumed by decode().
class SymbolStreams {
 public:
  explicit SymbolStreams(std::vector<Component> channels);

  std::size_t n() const { return channels_.size(); }
  /// Throws DecodeError when the channel is exhausted.
  Symbol read(std::size_t channel);
  std::size_t remaining(std::size_t channel) const { return channels_[channel].size() - pos_[channel]; }
  bool exhausted() const;

 private:
  std::vector<Component> channels_;
  std::vector<std::size_t> pos_;
};

/// Walks the tree from the root, reading one symbol from the node's channel at
/// each internal node. Returns the leaf's codeword index.
std::size_t decode(const DecodingTree& tree, SymbolStreams& streams);
/// Decodes until every stream is exhausted.
std::vector<std::size_t> decode_all(const DecodingTree& tree, SymbolStreams& streams);

/// Component-wise concatenation of the codewords of `source`.
std::vector<Component> encode(const Codebook& cb, std::span<const std::size_t> source);

/// Regions obtained by replaying the tree's nodes as equal guillotine cuts of
/// the codebook's container.
struct GuillotineReplay {
  std::vector<std::pair<std::size_t, Block>> leaves;
  std::vector<Block> vacant;
};
GuillotineReplay replay_guillotine(const DecodingTree& tree, const Container& container);

}  // namespace mcpc
