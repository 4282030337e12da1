// mcpc: command-line front end for the multichannel prefix code lab.
//
// Exit codes: 0 success or affirmative answer, 1 negative answer,
// 2 usage or parse error, 3 search budget exhausted.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcpc/disentangle.hpp"
#include "mcpc/io.hpp"
#include "mcpc/parallel.hpp"
#include "mcpc/rpg.hpp"
#include "mcpc/search.hpp"
#include "mcpc/selvage.hpp"
#include "mcpc/separation.hpp"
#include "mcpc/treedec.hpp"

using json = nlohmann::ordered_json;
using namespace mcpc;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr std::int64_t kDefaultBudgetSeconds = 1800;

struct Options {
  std::string input;
  std::string output;
  bool json = false;
  std::int64_t budget = kDefaultBudgetSeconds;
  bool certify = false;
  int jobs = 0;
  std::vector<std::uint32_t> sizes;
  std::size_t t = 0;
  bool all = false;
  std::string partition;
  std::optional<std::size_t> part;
  std::vector<std::uint64_t> witness;
  int force_case = 0;
};

std::string rational_text(const Rational& r) {
  return r.get_den() == 1 ? r.get_num().get_str() : r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string spec_text(const ChannelSpec& spec) {
  std::string s = "(";
  for (std::size_t i = 0; i < spec.n(); ++i) s += (i ? "," : "") + std::to_string(spec[i]);
  return s + ")";
}

json word_list(const std::vector<Word>& words) {
  json a = json::array();
  for (const auto& w : words) a.push_back(word_text(w));
  return a;
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

SearchOptions search_options(const Options& o) {
  SearchOptions s;
  if (!o.certify) s.budget = std::chrono::seconds(o.budget);
  return s;
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o) {
  Codebook cb = parse_codebook(read_file(o.input));
  const bool prefix = is_prefix_code(cb);
  const Rational kraft = kraft_sum(cb);
  json j{{"channels", cb.spec().sizes()}, {"codewords", cb.size()}, {"prefix", prefix}, {"kraft", rational_text(kraft)}};
  std::ostringstream os;
  os << "channels: " << spec_text(cb.spec()) << "\ncodewords: " << cb.size() << "\nprefix: " << (prefix ? "yes" : "no")
     << "\nkraft: " << rational_text(kraft) << "\n";
  if (prefix) {
    auto d = decide_tree_decodable(cb);
    if (auto* tree = std::get_if<DecodingTree>(&d)) {
      j["tree_decodable"] = true;
      j["tree"] = tree->to_sexpr();
      os << "tree-decodable: yes\ntree: " << tree->to_sexpr() << "\n";
    } else {
      const auto& nd = std::get<NotDecodable>(d);
      j["tree_decodable"] = false;
      j["witness_rows"] = nd.codeword_indices;
      j["witness"] = word_list(nd.witness.words);
      j["witness_channels"] = nd.witness.kept_channels;
      os << "tree-decodable: no\nwitness rows:";
      for (auto r : nd.codeword_indices) os << " " << r;
      os << "\nwitness channels:";
      for (auto c : nd.witness.kept_channels) os << " " << c;
      os << "\n";
      for (const auto& w : nd.witness.words) os << "  " << word_text(w) << "\n";
    }
  }
  emit(o, j, os.str());
  return prefix ? kExitYes : kExitNo;
}

int cmd_tree(const Options& o) {
  Codebook cb = parse_codebook(read_file(o.input));
  if (!is_prefix_code(cb)) {
    std::cerr << "error: input is not a prefix code\n";
    return kExitNo;
  }
  auto d = decide_tree_decodable(cb);
  if (auto* tree = std::get_if<DecodingTree>(&d)) {
    if (!o.output.empty()) write_file(o.output, tree->to_sexpr() + "\n");
    emit(o, json{{"tree_decodable", true}, {"tree", tree->to_sexpr()}}, tree->to_sexpr() + "\n");
    return kExitYes;
  }
  const auto& nd = std::get<NotDecodable>(d);
  std::ostringstream os;
  os << "not tree-decodable; uncuttable sub-codebook:\n";
  for (const auto& w : nd.witness.words) os << "  " << word_text(w) << "\n";
  emit(o, json{{"tree_decodable", false}, {"witness_rows", nd.codeword_indices}, {"witness", word_list(nd.witness.words)}},
       os.str());
  return kExitNo;
}

int cmd_selvage(const Options& o, bool spa_only) {
  ChannelSpec spec(o.sizes);
  SelvageOutput out = selvage_code(spec);
  const std::string file = spa_only ? print_probs(out.spa) : print_codebook(out.full);
  if (!o.output.empty()) write_file(o.output, file);
  json j{{"channels", spec.sizes()}, {"unit_count", out.unit_count.get_str()}, {"size", out.full.size()}};
  if (spa_only) {
    json p = json::array();
    for (const auto& v : out.spa.values()) p.push_back(rational_text(v));
    j["spa"] = p;
    j["entropy"] = exact_to_decimal(entropy(out.spa), 6);
  } else {
    j["codewords"] = word_list(out.full.codewords());
  }
  std::ostringstream os;
  os << "unit_count: " << out.unit_count.get_str() << "\n";
  if (o.output.empty()) os << file;
  emit(o, j, os.str());
  return kExitYes;
}

json partition_json(const Partition& p, const ChannelSpec& spec) {
  json parts = json::array();
  for (const auto& part : p.parts()) {
    json sizes = json::array();
    for (auto i : part) sizes.push_back(spec[i]);
    parts.push_back(sizes);
  }
  return parts;
}

int cmd_separate(const Options& o) {
  ChannelSpec spec(o.sizes);
  if (o.all) {
    json rows = json::array();
    std::ostringstream os;
    for (std::size_t t = 1; t <= spec.n(); ++t) {
      auto p = find_t_separation(spec, t);
      rows.push_back({{"t", t}, {"partition", p ? partition_json(*p, spec) : json(nullptr)}});
      os << "t=" << t << ": " << (p ? format_partition(*p, spec) : std::string("none")) << "\n";
    }
    auto report = above_tree_line_sufficient(spec);
    const bool above = report.verdict == TreeLineVerdict::kAboveTreeLine;
    const char* verdict = above ? "above tree line" : "unknown";
    os << "verdict: " << verdict << "\n";
    emit(o, json{{"channels", spec.sizes()}, {"separations", rows}, {"verdict", verdict}}, os.str());
    return above ? kExitYes : kExitNo;
  }
  if (o.t == 0) throw CLI::ValidationError("separate", "give --t or --all");
  auto p = find_t_separation(spec, o.t);
  std::ostringstream os;
  if (p) {
    os << o.t << "-separation: " << format_partition(*p, spec) << "\n";
  } else {
    os << "no " << o.t << "-separation\n";
    // Show why the singleton split fails where it is informative.
    for (std::size_t i = 0; i < spec.n(); ++i) {
      if (auto w = separation_witness({i}, spec)) {
        os << "  {" << spec[i] << "} not separated, witness x = (";
        for (std::size_t k = 0; k < w->x.size(); ++k) os << (k ? "," : "") << w->x[k];
        os << ")\n";
      }
    }
  }
  emit(o, json{{"channels", spec.sizes()}, {"t", o.t}, {"partition", p ? partition_json(*p, spec) : json(nullptr)}},
       os.str());
  return p ? kExitYes : kExitNo;
}

int cmd_disentangle(const Options& o) {
  ChannelSpec spec(o.sizes);
  Partition partition = o.partition.empty() ? Partition::from_rgs([&] {
    std::vector<std::size_t> rgs(spec.n());
    for (std::size_t i = 0; i < rgs.size(); ++i) rgs[i] = i;
    return rgs;
  }())
                                            : parse_partition(o.partition, spec.n());
  std::optional<DisentangleOutput> out;
  if (o.part) {
    if (*o.part >= partition.t()) throw std::invalid_argument("--part out of range");
    Exponents x(o.witness.begin(), o.witness.end());
    if (x.empty()) {
      auto w = separation_witness(partition[*o.part], spec);
      if (!w) {
        emit(o, json{{"separated", true}}, "part " + std::to_string(*o.part) + " is separated\n");
        return kExitNo;
      }
      x = w->x;
    }
    DisentangleInput in = make_disentangle_input(make_product_spec(spec, partition), *o.part, std::move(x));
    const int c = o.force_case ? o.force_case : (case1_applicable(in) ? 1 : 2);
    out = c == 1 ? disentangle_case1(in) : disentangle_case2(in);
  } else {
    out = disentangle(spec, partition);
  }
  if (!out) {
    emit(o, json{{"separation", true}}, "partition " + format_partition(partition, spec) + " is a t-separation\n");
    return kExitNo;
  }
  ProductSpec ps = make_product_spec(spec, partition);
  DisentangleReport rep = verify_disentangle(*out, ps);
  if (!o.output.empty()) write_file(o.output, print_codebook(out->code));

  std::ostringstream os;
  os << "case: " << (out->which == DisentangleCase::kCase1 ? 1 : 2) << "\nfailing part: {";
  for (std::size_t k = 0; k < partition[out->failing_part].size(); ++k) {
    os << (k ? "," : "") << spec[partition[out->failing_part][k]];
  }
  os << "}\nwitness: (";
  for (std::size_t k = 0; k < out->witness.size(); ++k) os << (k ? "," : "") << out->witness[k];
  os << ")\nreplaced row: " << word_text(out->code[out->failing_part]) << "\nsize: " << out->code.size()
     << "\ntree: " << out->tree.to_sexpr() << "\nprefix: " << (rep.prefix ? "yes" : "no")
     << "\ntree-decodable: " << (rep.tree_decodable ? "yes" : "no") << "\nkraft one: " << (rep.kraft_one ? "yes" : "no")
     << "\nzero redundancy: " << (rep.zero_redundancy ? "yes" : "no")
     << "\nsize formula: " << (rep.size_formula ? "yes" : "no") << "\n";
  if (o.output.empty()) os << print_codebook(out->code);
  json j{{"case", out->which == DisentangleCase::kCase1 ? 1 : 2},
         {"failing_part", partition_json(partition, spec)[out->failing_part]},
         {"witness", out->witness},
         {"size", out->code.size()},
         {"codewords", word_list(out->code.codewords())},
         {"tree", out->tree.to_sexpr()},
         {"checks",
          {{"prefix", rep.prefix},
           {"tree_decodable", rep.tree_decodable},
           {"kraft_one", rep.kraft_one},
           {"zero_redundancy", rep.zero_redundancy},
           {"size_formula", rep.size_formula}}}};
  if (out->i_dagger) j["i_dagger"] = *out->i_dagger;
  emit(o, j, os.str());
  return rep.all() ? kExitYes : kExitNo;
}

int cmd_search(const Options& o) {
  ChannelSpec spec(o.sizes);
  ProbMultiset p = o.input.empty() ? selvage_code(spec).spa : parse_probs(read_file(o.input));
  const auto start = std::chrono::steady_clock::now();
  SearchResult r = optimal_tree_code(p, spec, search_options(o));
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (!o.output.empty()) write_file(o.output, print_codebook(r.codebook));
  json probs = json::array();
  for (const auto& v : r.assignment.values()) probs.push_back(rational_text(v));
  json j{{"channels", spec.sizes()},
         {"expected", exact_to_decimal(r.expected, 6)},
         {"expected_exact", r.expected.to_string()},
         {"entropy", exact_to_decimal(entropy(p), 6)},
         {"optimal_is_entropy", r.optimal_is_entropy},
         {"certified", r.certified},
         {"tree", r.tree.to_sexpr()},
         {"codewords", word_list(r.codebook.codewords())},
         {"assignment", probs}};
  std::ostringstream os;
  os << "expected: " << exact_to_decimal(r.expected, 6) << " (" << r.expected.to_string() << ")\n"
     << "entropy: " << exact_to_decimal(entropy(p), 6) << "\n"
     << "at entropy: " << (r.optimal_is_entropy ? "yes" : "no") << "\n"
     << "certified: " << (r.certified ? "yes" : "no, budget exhausted; greedy incumbent shown") << "\n"
     << "time: " << ms << " ms\n"
     << "tree: " << r.tree.to_sexpr() << "\n";
  for (std::size_t k = 0; k < r.codebook.size(); ++k) {
    os << "  " << word_text(r.codebook[k]) << "  p=" << rational_text(r.assignment[k]) << "\n";
  }
  emit(o, j, os.str());
  return r.certified ? kExitYes : kExitBudget;
}

struct ReferenceRow {
  std::vector<std::uint32_t> sizes;
  const char* entropy;
  const char* optimal;
};

// Reference values, 6 decimals.
const ReferenceRow kReferenceRows[] = {
    {{2, 2, 2}, "1.559581", "1.559581"},
    {{5, 3, 2}, "2.976887", "2.980124"},
    {{6, 3, 2}, "3.154833", "3.154833"},
};

int cmd_table1(const Options& o) {
  json rows = json::array();
  std::ostringstream os;
  os << std::left << std::setw(10) << "Q" << std::setw(12) << "entropy" << std::setw(12) << "reference"
     << std::setw(12) << "optimal" << std::setw(12) << "reference" << std::setw(11) << "certified"
     << "time\n";
  bool all_match = true, all_certified = true;
  for (const auto& row : kReferenceRows) {
    ChannelSpec spec(row.sizes);
    ProbMultiset spa = selvage_code(spec).spa;
    const auto start = std::chrono::steady_clock::now();
    SearchResult r = optimal_tree_code(spa, spec, search_options(o));
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    const std::string h = exact_to_decimal(entropy(spa), 6), v = exact_to_decimal(r.expected, 6);
    const bool match = h == row.entropy && v == row.optimal;
    all_match = all_match && match;
    all_certified = all_certified && r.certified;
    os << std::setw(10) << spec_text(spec) << std::setw(12) << h << std::setw(12) << row.entropy << std::setw(12) << v
       << std::setw(12) << row.optimal << std::setw(11) << (r.certified ? "yes" : "no") << ms << " ms"
       << (match ? "" : "  MISMATCH") << "\n";
    rows.push_back({{"channels", spec.sizes()},
                    {"entropy", h},
                    {"entropy_reference", row.entropy},
                    {"optimal", v},
                    {"optimal_reference", row.optimal},
                    {"optimal_exact", r.expected.to_string()},
                    {"optimal_is_entropy", r.optimal_is_entropy},
                    {"certified", r.certified},
                    {"match", match}});
  }
  emit(o, json{{"rows", rows}}, os.str());
  if (!all_certified) return kExitBudget;
  return all_match ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multichannel prefix code lab"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--jobs", o.jobs, "Maximum worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  auto add_json = [&o](CLI::App* cmd) { cmd->add_flag("--json", o.json, "Machine-readable output"); };
  auto add_sizes = [&o](CLI::App* cmd) {
    cmd->add_option("sizes", o.sizes, "Channel alphabet sizes q_0 ... q_{n-1}")->required();
  };
  auto add_search_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--budget", o.budget, "Search time limit in seconds")->check(CLI::PositiveNumber);
    cmd->add_flag("--certify", o.certify, "Run without a time limit; fail unless optimality is proven");
  };

  auto* check = app.add_subcommand("check", "Prefix, Kraft and tree-decodability report for a codebook file");
  check->add_option("-i,--input", o.input, "Codebook file")->required();
  add_json(check);

  auto* tree = app.add_subcommand("tree", "Build a decoding tree for a codebook file");
  tree->add_option("-i,--input", o.input, "Codebook file")->required();
  tree->add_option("-o,--output", o.output, "Write the tree s-expression here");
  add_json(tree);

  auto* selvage = app.add_subcommand("selvage", "Selvage code for Q");
  add_sizes(selvage);
  selvage->add_option("-o,--output", o.output, "Write the codebook file here");
  add_json(selvage);

  auto* spa = app.add_subcommand("spa", "Selvage probability assembly for Q");
  add_sizes(spa);
  spa->add_option("-o,--output", o.output, "Write the probability file here");
  add_json(spa);

  auto* separate = app.add_subcommand("separate", "t-separation search for Q");
  add_sizes(separate);
  auto* t_opt = separate->add_option("--t", o.t, "Number of parts")->check(CLI::PositiveNumber);
  separate->add_flag("--all", o.all, "Every t, plus the tree line verdict")->excludes(t_opt);
  add_json(separate);

  auto* dis = app.add_subcommand("disentangle", "Tree-decodable zero-redundancy code for a non-separated partition");
  add_sizes(dis);
  dis->add_option("--partition", o.partition, "Positions per part, e.g. 0,1|2 (default: singletons)");
  dis->add_option("--part", o.part, "Failing part index (parts ordered by smallest position)");
  dis->add_option("--witness", o.witness, "Separation solution x, e.g. 0,1,2 (default: smallest)")->delimiter(',');
  dis->add_option("--case", o.force_case, "Force Case 1 or Case 2")->check(CLI::Range(1, 2));
  dis->add_option("-o,--output", o.output, "Write the codebook file here");
  add_json(dis);

  auto* search = app.add_subcommand("search", "Optimal tree-decodable code (default probabilities: the SPA of Q)");
  add_sizes(search);
  search->add_option("-i,--input", o.input, "Probability file");
  search->add_option("-o,--output", o.output, "Write the codebook file here");
  add_search_flags(search);
  add_json(search);

  auto* table1 = app.add_subcommand("table1", "Entropy and optimal tree-decodable length on three SPAs");
  add_search_flags(table1);
  add_json(table1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  set_jobs(o.jobs);

  try {
    if (*check) return cmd_check(o);
    if (*tree) return cmd_tree(o);
    if (*selvage) return cmd_selvage(o, false);
    if (*spa) return cmd_selvage(o, true);
    if (*separate) return cmd_separate(o);
    if (*dis) return cmd_disentangle(o);
    if (*search) return cmd_search(o);
    if (*table1) return cmd_table1(o);
  } catch (const NoApplicableCase& e) {
    std::cerr << "no applicable case: " << e.what() << "\n";
    return kExitNo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
