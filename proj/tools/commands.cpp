#include "cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fnfm/dynamics.hpp"
#include "fnfm/periodic.hpp"
#include "fnfm/whitehead.hpp"

namespace fnfm::cli {
namespace {

using ojson = nlohmann::ordered_json;

std::string pair_str(const PairElement& g) {
  return g.x.str() + " | " + g.y.str();
}

std::string hom_str(const FreeHom& h) {
  std::string s;
  for (size_t i = 0; i < h.images.size(); ++i) {
    if (i) s += ", ";
    s += h.domain.tag + std::to_string(i + 1) + " -> " + h.images[i].str();
  }
  return s;
}

std::vector<std::string> endo_lines(const EndoSpec& s) {
  std::vector<std::string> lines;
  for (size_t i = 0; i < s.a_images.size(); ++i)
    lines.push_back("a" + std::to_string(i + 1) + " -> " + pair_str(s.a_images[i]));
  for (size_t j = 0; j < s.b_images.size(); ++j)
    lines.push_back("b" + std::to_string(j + 1) + " -> " + pair_str(s.b_images[j]));
  return lines;
}

// Reports list generators shortest first, ties lexicographic, so runs
// are reproducible and diffable.
std::vector<std::string> pair_list(std::vector<PairElement> v) {
  std::stable_sort(v.begin(), v.end(), [](const PairElement& l, const PairElement& r) {
    const auto lk = std::make_tuple(l.x.length() + l.y.length(), l.x.str(), l.y.str());
    const auto rk = std::make_tuple(r.x.length() + r.y.length(), r.x.str(), r.y.str());
    return lk < rk;
  });
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const PairElement& g : v) out.push_back(pair_str(g));
  return out;
}

ojson point_json(const TruncatedPoint& p) {
  return ojson{{"x", p.x_prefix.str()}, {"y", p.y_prefix.str()}, {"depth", p.depth}};
}

std::string point_str(const ojson& p) {
  return p["x"].get<std::string>() + " | " + p["y"].get<std::string>() + " (depth " +
         std::to_string(p["depth"].get<long long>()) + ")";
}

// The plain report is generated from the same object as the JSON one:
// each key becomes a "key: value" line (underscores shown as spaces),
// integer lists print inline, string lists print one item per indented
// line.  That makes the two encodings identical field by field.
void render_plain(const ojson& j, std::ostream& out) {
  for (const auto& [key, value] : j.items()) {
    std::string label = key;
    std::replace(label.begin(), label.end(), '_', ' ');
    out << label << ":";
    if (value.is_boolean()) {
      out << " " << (value.get<bool>() ? "yes" : "no") << "\n";
    } else if (value.is_string()) {
      out << " " << value.get<std::string>() << "\n";
    } else if (value.is_number_integer()) {
      out << " " << value.get<long long>() << "\n";
    } else if (value.is_object()) {
      out << " " << point_str(value) << "\n";
    } else if (value.is_array() && !value.empty() && value.front().is_number()) {
      for (const auto& item : value) out << " " << item.get<long long>();
      out << "\n";
    } else {
      out << "\n";
      for (const auto& item : value)
        out << "  " << (item.is_object() ? point_str(item) : item.get<std::string>())
            << "\n";
    }
  }
}

void emit(const ojson& j, bool json, std::ostream& out) {
  if (json)
    out << j.dump(2) << "\n";
  else
    render_plain(j, out);
}

struct LoadedEndo {
  ProductEndo endo;
  std::optional<SubgroupBasisInput> oracle;
};

LoadedEndo load_endo(const std::string& file, const std::string& oracle_file) {
  EndoDocument doc = EndoDocument::parse(slurp(file));
  ProductEndo e{std::move(doc.spec)};
  std::optional<SubgroupBasisInput> oracle;
  if (!oracle_file.empty())
    oracle = parse_oracle(slurp(oracle_file), e.first_alphabet(), e.second_alphabet());
  return {std::move(e), std::move(oracle)};
}

int cmd_classify(const std::string& file, bool json, std::ostream& out) {
  LoadedEndo in = load_endo(file, "");
  const ProductEndo& e = in.endo;
  const ClassifiedData& d = e.data();
  const MorphismFlags f = e.flags();
  ojson j;
  j["type"] = type_name(e.type());
  j["swapped"] = e.swapped();
  j["n"] = e.n();
  j["m"] = e.m();
  j["injective"] = f.injective;
  j["surjective"] = f.surjective;
  j["automorphism"] = f.automorphism;
  if (d.first_root) j["first_root"] = d.first_root->str();
  if (d.second_root) j["second_root"] = d.second_root->str();
  auto vec = [&](const char* key, const std::vector<long long>& v) {
    if (!v.empty()) j[key] = v;
  };
  vec("a_exponents_first", d.a_to_first);
  vec("a_exponents_second", d.a_to_second);
  vec("b_exponents_first", d.b_to_first);
  vec("b_exponents_second", d.b_to_second);
  if (d.on_first) j["map_on_first"] = hom_str(*d.on_first);
  if (d.on_second) j["map_on_second"] = hom_str(*d.on_second);
  if (d.into_first) j["map_second_into_first"] = hom_str(*d.into_first);
  if (d.into_second) j["map_first_into_second"] = hom_str(*d.into_second);
  emit(j, json, out);
  return 0;
}

// Shared shape of the fix and per reports.
template <class Report>
int report_subgroup(const ProductEndo& e, const Report& r, ojson& j) {
  j["type"] = type_name(r.etype);
  j["swapped"] = e.swapped();
  j["verdict"] = verdict_name(r.verdict);
  if (!r.structure_note.empty()) j["note"] = r.structure_note;
  if (r.witness) j["witness"] = *r.witness;
  if (!r.generators.empty()) j["generators"] = pair_list(r.generators);
  return r.verdict == SubgroupVerdict::ConditionalOnOracle ? 2 : 0;
}

void report_oracle_required(const ProductEndo& e, const OracleRequired& ex, ojson& j) {
  j["type"] = type_name(e.type());
  j["swapped"] = e.swapped();
  j["verdict"] = verdict_name(SubgroupVerdict::ConditionalOnOracle);
  j["note"] = ex.what();
}

int cmd_fix(const std::string& file, const std::string& oracle_file, bool json,
            std::ostream& out) {
  LoadedEndo in = load_endo(file, oracle_file);
  ojson j;
  int rc = 0;
  try {
    FixReport r = fixed_subgroup(in.endo, in.oracle);
    rc = report_subgroup(in.endo, r, j);
  } catch (const OracleRequired& ex) {
    report_oracle_required(in.endo, ex, j);
    rc = 2;
  }
  emit(j, json, out);
  return rc;
}

int cmd_per(const std::string& file, const std::string& oracle_file, bool json,
            std::ostream& out) {
  LoadedEndo in = load_endo(file, oracle_file);
  ojson j;
  int rc = 0;
  try {
    PerReport r = periodic_subgroup(in.endo, in.oracle);
    rc = report_subgroup(in.endo, r, j);
    if (r.period_bound) j["period_bound"] = *r.period_bound;
    for (const auto& [period, points] : r.per_period_data)
      if (!points.empty())
        j["period_" + std::to_string(period) + "_points"] = pair_list(points);
  } catch (const OracleRequired& ex) {
    report_oracle_required(in.endo, ex, j);
    rc = 2;
  }
  emit(j, json, out);
  return rc;
}

int cmd_whitehead(const std::string& variant, const std::string& source,
                  const std::string& target, long long bound, int n, int m, bool json,
                  std::ostream& out) {
  const Alphabet A{n, 'a'}, B{m, 'b'};
  const PairElement src = parse_pair(source, A, B);
  const PairElement tgt = parse_pair(target, A, B);
  const WhVariant v = variant == "a"   ? WhVariant::Auto
                      : variant == "m" ? WhVariant::Mono
                                       : WhVariant::Endo;
  const WhVerdict w = whp_product(src, tgt, v, bound);
  ojson j;
  j["variant"] = v == WhVariant::Auto   ? "automorphism"
                 : v == WhVariant::Mono ? "monomorphism"
                                        : "endomorphism";
  j["source"] = pair_str(src);
  j["target"] = pair_str(tgt);
  j["answer"] = w.answer == WhAnswer::Yes  ? "Yes"
                : w.answer == WhAnswer::No ? "No"
                                           : "Unknown";
  if (w.answer == WhAnswer::Unknown) j["bound"] = w.bound;
  if (!w.decided_by.empty()) j["decided_by"] = w.decided_by;
  if (w.endo) j["certificate"] = endo_lines(w.endo->spec());
  if (w.component) j["component_certificate"] = hom_str(*w.component);
  emit(j, json, out);
  return w.answer == WhAnswer::Unknown ? 2 : 0;
}

int cmd_dyn_uc(const std::string& file, bool json, std::ostream& out) {
  LoadedEndo in = load_endo(file, "");
  const UCReport r = uniform_continuity(in.endo);
  ojson j;
  j["uniformly_continuous"] = r.uniformly_continuous;
  j["reason"] = r.reason == UCReason::UCTypeWithUCComponents
                    ? "extendable type, extendable components"
                : r.reason == UCReason::TypeObstruction ? "type obstruction"
                                                        : "component obstruction";
  if (r.reason == UCReason::ComponentObstruction) j["component"] = r.component;
  emit(j, json, out);
  return 0;
}

int cmd_dyn_iterate(const std::string& file, const std::string& point, long long depth,
                    long long steps, long long cap, bool json, std::ostream& out) {
  LoadedEndo in = load_endo(file, "");
  const PairElement g =
      parse_pair(point, in.endo.first_alphabet(), in.endo.second_alphabet());
  const TruncatedPoint p{g.x, g.y, depth};
  const std::vector<TruncatedPoint> orbit = iterate_truncated(in.endo, p, steps, cap);
  ojson j;
  j["point"] = point_json(p);
  j["steps"] = static_cast<long long>(orbit.size());
  if (!orbit.empty()) {
    ojson arr = ojson::array();
    for (const TruncatedPoint& q : orbit) arr.push_back(point_json(q));
    j["orbit"] = std::move(arr);
  }
  emit(j, json, out);
  return 0;
}

int cmd_dyn_classify(const std::string& file, const std::string& oracle_file,
                     const std::string& point, long long depth, const ProbeConfig& cfg,
                     bool json, std::ostream& out) {
  LoadedEndo in = load_endo(file, oracle_file);
  const PairElement g =
      parse_pair(point, in.endo.first_alphabet(), in.endo.second_alphabet());
  const TruncatedPoint p{g.x, g.y, depth};
  ojson j;
  int rc = 0;
  try {
    const BoundaryClass c = boundary_fixed_classify(in.endo, p, depth, in.oracle, cfg);
    j["image_compatible"] = true;
    j["depth"] = c.depth;
    ojson cl = ojson::array();
    bool inconclusive = false;
    for (const BoundaryVerdict v : c.classification) {
      cl.push_back(boundary_verdict_name(v));
      inconclusive = inconclusive || v == BoundaryVerdict::Inconclusive;
    }
    j["classification"] = std::move(cl);
    if (c.fixed_witness) j["fixed_witness"] = pair_str(*c.fixed_witness);
    if (c.probes) {
      j["probes"] = c.probes;
      j["converged"] = c.converged;
    }
    if (c.inverse_probes) {
      j["inverse_probes"] = c.inverse_probes;
      j["inverse_converged"] = c.inverse_converged;
    }
    if (!c.witnesses.empty())
      j["witnesses_stored"] = static_cast<long long>(c.witnesses.size());
    rc = inconclusive ? 2 : 0;
  } catch (const NotFixedAtDepth& ex) {
    // The one-step image ball shows a moved letter: refuted, decided.
    j["image_compatible"] = false;
    j["depth"] = ex.depth;
  }
  emit(j, json, out);
  return rc;
}

int cmd_word(const std::string& op, const std::string& tag, int rank,
             const std::string& text, bool json, std::ostream& out) {
  const Alphabet alpha{rank, tag[0]};
  const FreeWord w = parse_word(text, alpha);
  ojson j;
  if (op == "reduce") {
    j["reduced"] = w.str();
    j["length"] = static_cast<long long>(w.length());
  } else if (op == "root") {
    const auto [root, exponent] = primitive_root(w);
    j["root"] = root.str();
    j["exponent"] = exponent;
  } else {
    const PowerExponents p = power_exponents(w);
    j["all_integers"] = p.all_integers;
    if (!p.values.empty()) j["exponents"] = p.values;
  }
  emit(j, json, out);
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"decision tools for endomorphisms of a product of two free groups",
               "fnfm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fnfm 0.1.0");
  bool json = false;
  app.add_flag("--json", json, "emit the report as a JSON object");
  auto with_json = [&](CLI::App* sub) {
    sub->add_flag("--json", json, "emit the report as a JSON object");
    return sub;
  };

  std::string file, oracle_file, point, source, target, variant, word_text;
  std::string tag = "a";
  int rank = 2, wh_n = 2, wh_m = 2;
  long long bound = 12, depth = 16, steps = 32, cap = 0;
  ProbeConfig cfg;

  CLI::App* classify = with_json(app.add_subcommand(
      "classify", "validate an endomorphism and print its structural class"));
  classify->add_option("file", file, "endomorphism document")->required();

  CLI::App* fix = with_json(
      app.add_subcommand("fix", "structure of the fixed subgroup"));
  fix->add_option("file", file, "endomorphism document")->required();
  fix->add_option("--oracle", oracle_file, "component-basis file");

  CLI::App* per = with_json(
      app.add_subcommand("per", "structure of the periodic subgroup"));
  per->add_option("file", file, "endomorphism document")->required();
  per->add_option("--oracle", oracle_file, "component-basis file");

  CLI::App* wh = with_json(app.add_subcommand(
      "whitehead", "does some endomorphism of the given kind map source to target"));
  wh->add_option("--variant", variant, "a = automorphism, m = monomorphism, e = endomorphism")
      ->required()
      ->check(CLI::IsMember({"a", "m", "e"}));
  wh->add_option("--source", source, "pair word \"<x> | <y>\"")->required();
  wh->add_option("--target", target, "pair word \"<x> | <y>\"")->required();
  wh->add_option("--bound", bound, "total image length for bounded searches");
  wh->add_option("-n,--first-rank", wh_n, "rank of the first factor");
  wh->add_option("-m,--second-rank", wh_m, "rank of the second factor");

  CLI::App* dyn = app.add_subcommand("dynamics", "boundary extension of the endomorphism");
  dyn->require_subcommand(1);
  CLI::App* dyn_uc = with_json(dyn->add_subcommand(
      "uc", "does the map extend uniformly continuously to the boundary"));
  dyn_uc->add_option("file", file, "endomorphism document")->required();
  CLI::App* dyn_it = with_json(
      dyn->add_subcommand("iterate", "orbit of a truncated boundary point"));
  dyn_it->add_option("file", file, "endomorphism document")->required();
  dyn_it->add_option("--point", point, "truncated point \"<x-prefix> | <y-prefix>\"")
      ->required();
  dyn_it->add_option("--depth", depth, "guaranteed depth of the starting point")
      ->check(CLI::PositiveNumber);
  dyn_it->add_option("--steps", steps, "number of iterates")->check(CLI::NonNegativeNumber);
  dyn_it->add_option("--cap", cap, "cap on the tracked depth, 0 = none")
      ->check(CLI::NonNegativeNumber);
  CLI::App* dyn_cl = with_json(dyn->add_subcommand(
      "classify-boundary", "classify a fixed ball: singular, attractor, repeller"));
  dyn_cl->add_option("file", file, "endomorphism document")->required();
  dyn_cl->add_option("--point", point, "truncated point \"<x-prefix> | <y-prefix>\"")
      ->required();
  dyn_cl->add_option("--depth", depth, "tested depth")->check(CLI::PositiveNumber);
  dyn_cl->add_option("--oracle", oracle_file, "component-basis file");
  dyn_cl->add_option("--budget", cfg.budget, "iterations per perturbation probe")
      ->check(CLI::PositiveNumber);
  dyn_cl->add_option("--suffix-len", cfg.suffix_len, "length of perturbation suffixes")
      ->check(CLI::PositiveNumber);
  dyn_cl->add_option("--keep", cfg.keep, "kept prefix length, 0 = half the depth")
      ->check(CLI::NonNegativeNumber);
  dyn_cl->add_option("--witness-cap", cfg.witness_cap, "stored probe orbits")
      ->check(CLI::NonNegativeNumber);

  CLI::App* word = app.add_subcommand("word", "operations on a single free-group word");
  word->require_subcommand(1);
  CLI::App* w_reduce = with_json(word->add_subcommand("reduce", "freely reduce"));
  CLI::App* w_root = with_json(word->add_subcommand("root", "primitive root and exponent"));
  CLI::App* w_powers = with_json(
      word->add_subcommand("powers", "all k such that the word is a k-th power"));
  for (CLI::App* sub : {w_reduce, w_root, w_powers}) {
    sub->add_option("word", word_text, "word in the surface syntax")->required();
    sub->add_option("--tag", tag, "alphabet tag")->check(CLI::IsMember({"a", "b"}));
    sub->add_option("--rank", rank, "alphabet rank")->check(CLI::Range(1, 1000000));
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*classify) return cmd_classify(file, json, out);
    if (*fix) return cmd_fix(file, oracle_file, json, out);
    if (*per) return cmd_per(file, oracle_file, json, out);
    if (*wh) return cmd_whitehead(variant, source, target, bound, wh_n, wh_m, json, out);
    if (*dyn_uc) return cmd_dyn_uc(file, json, out);
    if (*dyn_it) return cmd_dyn_iterate(file, point, depth, steps, cap, json, out);
    if (*dyn_cl) return cmd_dyn_classify(file, oracle_file, point, depth, cfg, json, out);
    if (*w_reduce) return cmd_word("reduce", tag, rank, word_text, json, out);
    if (*w_root) return cmd_word("root", tag, rank, word_text, json, out);
    if (*w_powers) return cmd_word("powers", tag, rank, word_text, json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand selected\n";
  return 1;
}

}  // namespace fnfm::cli
