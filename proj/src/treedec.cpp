#include "mcpc/treedec.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_map>

namespace mcpc {

// ---------------------------------------------------------------------------
// DecodingTree

std::int32_t DecodingTree::add_leaf(std::size_t codeword) {
  Node n;
  n.codeword = codeword;
  nodes_.push_back(std::move(n));
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t DecodingTree::add_internal(std::size_t channel, std::vector<std::int32_t> children) {
  Node n;
  n.channel = static_cast<std::int32_t>(channel);
  n.children = std::move(children);
  nodes_.push_back(std::move(n));
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t DecodingTree::graft(const DecodingTree& other, std::span<const std::size_t> relabel) {
  auto copy = [&](auto&& self, std::int32_t id) -> std::int32_t {
    if (id == kAbsent) return kAbsent;
    const Node& src = other.node(id);
    if (src.is_leaf()) return add_leaf(relabel[src.codeword]);
    std::vector<std::int32_t> kids;
    kids.reserve(src.children.size());
    for (auto c : src.children) kids.push_back(self(self, c));
    return add_internal(static_cast<std::size_t>(src.channel), std::move(kids));
  };
  return copy(copy, other.root());
}

std::size_t DecodingTree::leaf_count() const {
  std::size_t count = 0;
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    if (id == kAbsent) return;
    const Node& nd = node(id);
    if (nd.is_leaf()) {
      ++count;
      return;
    }
    for (auto c : nd.children) self(self, c);
  };
  walk(walk, root_);
  return count;
}

std::vector<std::pair<std::size_t, Word>> DecodingTree::leaf_words(std::size_t n) const {
  std::vector<std::pair<std::size_t, Word>> out;
  Word path = Word::epsilon(n);
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    const Node& nd = node(id);
    if (nd.is_leaf()) {
      out.emplace_back(nd.codeword, path);
      return;
    }
    auto ch = static_cast<std::size_t>(nd.channel);
    for (std::size_t s = 0; s < nd.children.size(); ++s) {
      if (nd.children[s] == kAbsent) continue;
      path[ch].push_back(static_cast<Symbol>(s));
      self(self, nd.children[s]);
      path[ch].pop_back();
    }
  };
  if (root_ != kAbsent) walk(walk, root_);
  return out;
}

void DecodingTree::validate(const ChannelSpec& spec) const {
  if (root_ == kAbsent) throw std::invalid_argument("decoding tree has no root");
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
      throw std::invalid_argument("decoding tree references a missing node");
    }
    const Node& nd = nodes_[static_cast<std::size_t>(id)];
    if (nd.is_leaf()) return;
    auto ch = static_cast<std::size_t>(nd.channel);
    if (ch >= spec.n()) throw std::invalid_argument("decoding tree node has an unknown class");
    if (nd.children.size() != spec[ch]) {
      throw std::invalid_argument("class " + std::to_string(ch) + " node must have " +
                                  std::to_string(spec[ch]) + " slots");
    }
    bool any = false;
    for (auto c : nd.children) {
      if (c == kAbsent) continue;
      any = true;
      self(self, c);
    }
    if (!any) throw std::invalid_argument("internal node without children");
  };
  walk(walk, root_);
}

void DecodingTree::print(std::int32_t id, std::string& out) const {
  if (id == kAbsent) {
    out += '_';
    return;
  }
  const Node& nd = node(id);
  if (nd.is_leaf()) {
    out += 'L';
    out += std::to_string(nd.codeword);
    return;
  }
  out += '(';
  out += std::to_string(nd.channel);
  for (auto c : nd.children) {
    out += ' ';
    print(c, out);
  }
  out += ')';
}

std::string DecodingTree::to_sexpr() const {
  std::string out;
  print(root_, out);
  return out;
}

DecodingTree DecodingTree::parse(std::string_view text) {
  DecodingTree tree;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> void {
    throw std::invalid_argument("tree parse error at offset " + std::to_string(pos) + ": " + what);
  };
  auto number = [&]() -> std::size_t {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected a number");
    return std::stoul(std::string(text.substr(start, pos - start)));
  };
  auto node = [&](auto&& self) -> std::int32_t {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '_') {
      ++pos;
      return kAbsent;
    }
    if (c == 'L') {
      ++pos;
      return tree.add_leaf(number());
    }
    if (c != '(') fail("expected '(', 'L' or '_'");
    ++pos;
    skip_ws();
    std::size_t channel = number();
    std::vector<std::int32_t> kids;
    for (;;) {
      skip_ws();
      if (pos >= text.size()) fail("unterminated node");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      kids.push_back(self(self));
    }
    if (kids.empty()) fail("internal node without slots");
    return tree.add_internal(channel, std::move(kids));
  };
  tree.set_root(node(node));
  skip_ws();
  if (pos != text.size()) fail("trailing characters");
  return tree;
}

bool tree_decodes(const DecodingTree& tree, const Codebook& cb) {
  try {
    tree.validate(cb.spec());
  } catch (const std::invalid_argument&) {
    return false;
  }
  auto leaves = tree.leaf_words(cb.spec().n());
  if (leaves.size() != cb.size()) return false;
  std::vector<bool> seen(cb.size(), false);
  for (const auto& [label, word] : leaves) {
    if (label >= cb.size() || seen[label] || word != cb[label]) return false;
    seen[label] = true;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Epsilon locating and trimming

EpsilonMap epsilon_locating(const Codebook& cb) {
  EpsilonMap e(cb.spec().n());
  for (std::size_t j = 0; j < cb.size(); ++j) {
    for (std::size_t i = 0; i < cb.spec().n(); ++i) {
      if (cb[j][i].empty()) e[i].push_back(j);
    }
  }
  return e;
}

bool epsilon_blocked(const Codebook& cb) {
  auto e = epsilon_locating(cb);
  return std::all_of(e.begin(), e.end(), [](const auto& rows) { return !rows.empty(); });
}

namespace {

Component common_prefix(const std::vector<Word>& words, std::size_t channel) {
  Component prefix = words.front()[channel];
  for (const auto& w : words) {
    const auto& c = w[channel];
    std::size_t k = 0;
    while (k < prefix.size() && k < c.size() && prefix[k] == c[k]) ++k;
    prefix.resize(k);
  }
  return prefix;
}

}  // namespace

TrimResult trim_words(const std::vector<Word>& words) {
  if (words.empty()) throw std::invalid_argument("trim: empty word list");
  const std::size_t n = words.front().n();
  TrimResult r;
  r.removed_prefix = Word::epsilon(n);
  std::vector<Word> stripped = words;
  for (std::size_t i = 0; i < n; ++i) {
    r.removed_prefix[i] = common_prefix(words, i);
    const auto cut = static_cast<std::ptrdiff_t>(r.removed_prefix[i].size());
    for (auto& w : stripped) w[i].erase(w[i].begin(), w[i].begin() + cut);
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool dummy = std::all_of(stripped.begin(), stripped.end(), [i](const Word& w) { return w[i].empty(); });
    (dummy ? r.removed_channels : r.kept_channels).push_back(i);
  }
  for (const auto& w : stripped) {
    std::vector<Component> comps;
    for (auto i : r.kept_channels) comps.push_back(w[i]);
    r.words.emplace_back(std::move(comps));
  }
  return r;
}

TrimResult trim(const Codebook& cb) { return trim_words(cb.codewords()); }

Codebook TrimResult::codebook(const ChannelSpec& original) const {
  if (kept_channels.empty()) throw std::invalid_argument("trim removed every channel");
  std::vector<std::uint32_t> sizes;
  for (auto i : kept_channels) sizes.push_back(original[i]);
  return Codebook(ChannelSpec(std::move(sizes)), words);
}

// ---------------------------------------------------------------------------
// Guillotine-cut search

namespace {

struct Item {
  std::size_t index;
  Word residual;
};

struct Witness {
  std::vector<std::size_t> indices;
  TrimResult trimmed;
};

class CutSearch {
 public:
  explicit CutSearch(const ChannelSpec& spec) : spec_(spec) {}

  std::optional<Witness> decide(std::vector<Item> items) {
    if (items.size() == 1) return std::nullopt;
    Prepared p = prepare(std::move(items));
    if (auto it = memo_.find(p.key); it != memo_.end()) {
      if (it->second.ok) return std::nullopt;
      return recall(it->second, p);
    }

    std::optional<Witness> first_failure;
    bool any_cut = false;
    for (std::size_t c = 0; c < spec_.n(); ++c) {
      if (!cuttable(p.items, c)) continue;
      any_cut = true;
      bool ok = true;
      for (auto& group : split(p.items, c)) {
        if (auto w = decide(std::move(group.second))) {
          ok = false;
          if (!first_failure) first_failure = std::move(w);
          break;
        }
      }
      if (ok) {
        memo_[p.key] = Entry{true, c, false, {}, {}};
        return std::nullopt;
      }
    }

    Entry e{false, 0, !any_cut, {}, {}};
    Witness w;
    if (!any_cut) {
      w = self_witness(p);
    } else {
      w = std::move(*first_failure);
      std::map<std::size_t, std::size_t> position;
      for (std::size_t k = 0; k < p.items.size(); ++k) position[p.items[k].index] = k;
      for (auto idx : w.indices) e.positions.push_back(position.at(idx));
      e.trimmed = w.trimmed;
    }
    memo_[p.key] = std::move(e);
    return w;
  }

  // Requires a prior successful decide() on the same items.
  std::int32_t build(std::vector<Item> items, DecodingTree& tree) {
    if (items.size() == 1) {
      return wrap_chain(items.front().residual, tree.add_leaf(items.front().index), tree);
    }
    Prepared p = prepare(std::move(items));
    const Entry& e = memo_.at(p.key);
    if (!e.ok) throw std::logic_error("build called on a non-decodable sub-codebook");
    const std::size_t c = e.channel;
    std::vector<std::int32_t> slots(spec_[c], DecodingTree::kAbsent);
    for (auto& [symbol, group] : split(p.items, c)) slots[symbol] = build(std::move(group), tree);
    return wrap_chain(p.prefix, tree.add_internal(c, std::move(slots)), tree);
  }

 private:
  struct Prepared {
    std::vector<Item> items;  // sorted, common prefix stripped
    std::vector<Word> unstripped;
    Word prefix;
    std::string key;
  };

  struct Entry {
    bool ok;
    std::size_t channel;
    bool self;  // the witness is the sub-codebook itself
    std::vector<std::size_t> positions;
    TrimResult trimmed;
  };

  Prepared prepare(std::vector<Item> items) const {
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.residual < b.residual; });
    Prepared p;
    for (const auto& it : items) p.unstripped.push_back(it.residual);
    p.prefix = Word::epsilon(spec_.n());
    for (std::size_t i = 0; i < spec_.n(); ++i) {
      p.prefix[i] = common_prefix(p.unstripped, i);
      const auto cut = static_cast<std::ptrdiff_t>(p.prefix[i].size());
      for (auto& it : items) it.residual[i].erase(it.residual[i].begin(), it.residual[i].begin() + cut);
    }
    for (const auto& it : items) {
      for (std::size_t i = 0; i < spec_.n(); ++i) {
        for (Symbol s : it.residual[i]) {
          p.key += std::to_string(s);
          p.key += ',';
        }
        p.key += '|';
      }
      p.key += ';';
    }
    p.items = std::move(items);
    return p;
  }

  static bool cuttable(const std::vector<Item>& items, std::size_t c) {
    return std::none_of(items.begin(), items.end(), [c](const Item& it) { return it.residual[c].empty(); });
  }

  static std::map<Symbol, std::vector<Item>> split(const std::vector<Item>& items, std::size_t c) {
    std::map<Symbol, std::vector<Item>> groups;
    for (const auto& it : items) {
      Item child = it;
      Symbol s = child.residual[c].front();
      child.residual[c].erase(child.residual[c].begin());
      groups[s].push_back(std::move(child));
    }
    return groups;
  }

  static Witness self_witness(const Prepared& p) {
    Witness w;
    for (const auto& it : p.items) w.indices.push_back(it.index);
    w.trimmed = trim_words(p.unstripped);
    return w;
  }

  static Witness recall(const Entry& e, const Prepared& p) {
    if (e.self) return self_witness(p);
    Witness w;
    for (auto pos : e.positions) w.indices.push_back(p.items[pos].index);
    w.trimmed = e.trimmed;
    return w;
  }

  // Single-child nodes reading `path` (channels ascending) above `node`.
  std::int32_t wrap_chain(const Word& path, std::int32_t node, DecodingTree& tree) const {
    for (std::size_t i = spec_.n(); i-- > 0;) {
      for (std::size_t k = path[i].size(); k-- > 0;) {
        std::vector<std::int32_t> slots(spec_[i], DecodingTree::kAbsent);
        slots[path[i][k]] = node;
        node = tree.add_internal(i, std::move(slots));
      }
    }
    return node;
  }

  const ChannelSpec& spec_;
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace

TreeDecision decide_tree_decodable(const Codebook& cb) {
  if (cb.size() == 0) throw std::invalid_argument("decide_tree_decodable: empty codebook");
  if (!is_prefix_code(cb)) throw std::invalid_argument("decide_tree_decodable: input is not a prefix code");
  std::vector<Item> items;
  for (std::size_t j = 0; j < cb.size(); ++j) items.push_back({j, cb[j]});
  CutSearch search(cb.spec());
  if (auto w = search.decide(items)) return NotDecodable{std::move(w->indices), std::move(w->trimmed)};
  DecodingTree tree;
  tree.set_root(search.build(std::move(items), tree));
  return tree;
}

// ---------------------------------------------------------------------------
// Decoding and encoding

SymbolStreams::SymbolStreams(std::vector<Component> channels)
    : channels_(std::move(channels)), pos_(channels_.size(), 0) {}

Symbol SymbolStreams::read(std::size_t channel) {
  if (channel >= channels_.size()) throw DecodeError("no such channel");
  if (pos_[channel] >= channels_[channel].size()) {
    throw DecodeError("channel " + std::to_string(channel) + " exhausted");
  }
  return channels_[channel][pos_[channel]++];
}

bool SymbolStreams::exhausted() const {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (pos_[i] < channels_[i].size()) return false;
  }
  return true;
}

std::size_t decode(const DecodingTree& tree, SymbolStreams& streams) {
  std::int32_t id = tree.root();
  if (id == DecodingTree::kAbsent) throw DecodeError("empty decoding tree");
  for (;;) {
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) return nd.codeword;
    Symbol s = streams.read(static_cast<std::size_t>(nd.channel));
    if (s >= nd.children.size() || nd.children[s] == DecodingTree::kAbsent) {
      throw DecodeError("absent child reached");
    }
    id = nd.children[s];
  }
}

std::vector<std::size_t> decode_all(const DecodingTree& tree, SymbolStreams& streams) {
  std::vector<std::size_t> out;
  while (!streams.exhausted()) out.push_back(decode(tree, streams));
  return out;
}

std::vector<Component> encode(const Codebook& cb, std::span<const std::size_t> source) {
  std::vector<Component> streams(cb.spec().n());
  for (auto j : source) {
    if (j >= cb.size()) throw std::out_of_range("encode: codeword index out of range");
    for (std::size_t i = 0; i < streams.size(); ++i) {
      streams[i].insert(streams[i].end(), cb[j][i].begin(), cb[j][i].end());
    }
  }
  return streams;
}

GuillotineReplay replay_guillotine(const DecodingTree& tree, const Container& container) {
  GuillotineReplay out;
  Block full;
  full.origin.assign(container.spec.n(), BigInt(0));
  full.size = container.edges();
  auto walk = [&](auto&& self, std::int32_t id, const Block& region) -> void {
    if (id == DecodingTree::kAbsent) {
      out.vacant.push_back(region);
      return;
    }
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) {
      out.leaves.emplace_back(nd.codeword, region);
      return;
    }
    auto ch = static_cast<std::size_t>(nd.channel);
    const auto q = container.spec[ch];
    if (region.size[ch] % q != 0) throw std::invalid_argument("tree cuts deeper than the container");
    BigInt step = region.size[ch] / q;
    for (std::size_t s = 0; s < nd.children.size(); ++s) {
      Block sub = region;
      sub.origin[ch] += step * static_cast<unsigned long>(s);
      sub.size[ch] = step;
      self(self, nd.children[s], sub);
    }
  };
  walk(walk, tree.root(), full);
  return out;
}

}  // namespace mcpc
