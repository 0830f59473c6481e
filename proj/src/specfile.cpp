#include "syncomp/specfile.hpp"

#include <fstream>

#include "json.hpp"

namespace syncomp {

namespace {

using nlohmann::json;

Value value_from_json(const json& j, const std::string& where) {
  if (j.is_boolean()) {
    return Value::boolean(j.get<bool>());
  }
  if (j.is_number_unsigned()) {
    return Value::nat(j.get<std::uint64_t>());
  }
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "ok") return Value::ok();
    if (s == "fail") return Value::fail();
    if (s == "nomsg") return Value::nomsg();
    if (s == "*" || s == "star") return Value::star();
    throw SpecFileError(where + ": unknown value literal \"" + s + "\"");
  }
  if (j.is_array()) {
    std::vector<Value> elems;
    for (std::size_t i = 0; i < j.size(); ++i) {
      elems.push_back(
          value_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    if (elems.empty()) {
      throw SpecFileError(where + ": tuples need at least one component");
    }
    return Value::tuple(std::move(elems));
  }
  if (j.is_object()) {
    if (j.contains("msg")) {
      const json& m = j.at("msg");
      if (!m.is_array() || m.size() != 3) {
        throw SpecFileError(where + ": msg needs [id, x, y]");
      }
      return Value::msg(m[0].get<std::uint32_t>(), m[1].get<std::uint64_t>(),
                        m[2].get<std::uint64_t>());
    }
    if (j.contains("ids")) {
      std::vector<std::uint32_t> ids;
      for (const json& id : j.at("ids")) {
        ids.push_back(id.get<std::uint32_t>());
      }
      return Value::id_list(std::move(ids));
    }
  }
  throw SpecFileError(where + ": cannot read a value from " + j.dump());
}

// Recursive-descent sort grammar; `at` advances through `text`.
Sort parse_sort_at(const std::string& text, std::size_t& at) {
  auto skip_ws = [&] {
    while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) {
      ++at;
    }
  };
  skip_ws();
  std::size_t start = at;
  while (at < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[at])) || text[at] == '_')) {
    ++at;
  }
  std::string word = text.substr(start, at - start);
  skip_ws();
  if (word == "unit") return Sort::unit();
  if (word == "boolean") return Sort::boolean();
  if (word == "natural") return Sort::natural();
  if (word == "status") return Sort::status();
  if (word == "message") return Sort::message();
  if (word == "idList") return Sort::id_list();
  if (word == "optional" || word == "tuple") {
    if (at >= text.size() || text[at] != '(') {
      throw SpecFileError("sort \"" + text + "\": expected '(' after " + word);
    }
    ++at;
    std::vector<Sort> inner;
    while (true) {
      inner.push_back(parse_sort_at(text, at));
      skip_ws();
      if (at < text.size() && text[at] == ',') {
        ++at;
        continue;
      }
      break;
    }
    if (at >= text.size() || text[at] != ')') {
      throw SpecFileError("sort \"" + text + "\": expected ')'");
    }
    ++at;
    if (word == "optional") {
      if (inner.size() != 1) {
        throw SpecFileError("sort \"" + text + "\": optional takes one sort");
      }
      return Sort::optional(inner[0]);
    }
    return Sort::tuple(std::move(inner));
  }
  throw SpecFileError("unknown sort \"" + word + "\" in \"" + text + "\"");
}

Port parse_port(const std::string& text) {
  // "(e,3)" or "(2,1)"
  std::size_t at = 0;
  auto fail = [&text]() -> Port {
    throw SpecFileError("malformed port \"" + text + "\" (expected \"(owner,slot)\")");
  };
  auto skip_ws = [&] {
    while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) {
      ++at;
    }
  };
  skip_ws();
  if (at >= text.size() || text[at] != '(') return fail();
  ++at;
  skip_ws();
  std::uint32_t owner;
  if (at < text.size() && text[at] == 'e') {
    owner = Port::env_owner;
    ++at;
  } else {
    std::size_t start = at;
    while (at < text.size() && std::isdigit(static_cast<unsigned char>(text[at]))) {
      ++at;
    }
    if (at == start) return fail();
    owner = static_cast<std::uint32_t>(std::stoul(text.substr(start, at - start)));
    if (owner == 0) return fail();
  }
  skip_ws();
  if (at >= text.size() || text[at] != ',') return fail();
  ++at;
  skip_ws();
  std::size_t start = at;
  while (at < text.size() && std::isdigit(static_cast<unsigned char>(text[at]))) {
    ++at;
  }
  if (at == start) return fail();
  std::uint32_t slot =
      static_cast<std::uint32_t>(std::stoul(text.substr(start, at - start)));
  skip_ws();
  if (at >= text.size() || text[at] != ')' || slot == 0) return fail();
  ++at;
  skip_ws();
  if (at != text.size()) return fail();
  return Port{owner, slot};
}

std::map<std::string, FormulaPtr> parse_formula_table(const json& doc) {
  std::map<std::string, FormulaPtr> table;
  if (!doc.contains("formulas")) return table;
  for (const auto& [name, text] : doc.at("formulas").items()) {
    if (!text.is_string()) {
      throw SpecFileError("formula \"" + name + "\" must be a string");
    }
    try {
      table[name] = parse_formula(text.get_ref<const std::string&>());
    } catch (const FormulaParseError& err) {
      throw SpecFileError("formula \"" + name + "\": " + err.what());
    }
  }
  return table;
}

SpecBundle load_scenario(const json& doc) {
  const json& sc = doc.at("scenario");
  if (!sc.contains("positions") || !sc.contains("rmaxSquared")) {
    throw SpecFileError("scenario needs positions and rmaxSquared");
  }
  for (const char* key : {"machines", "environment", "wiring", "initial",
                          "envInputs"}) {
    if (doc.contains(key)) {
      throw SpecFileError(std::string("scenario specs derive \"") + key +
                          "\" automatically; remove it");
    }
  }
  std::vector<NodePos> positions;
  for (const json& p : sc.at("positions")) {
    if (!p.is_array() || p.size() != 3) {
      throw SpecFileError("scenario positions are [id, x, y] triples");
    }
    positions.push_back(NodePos{p[0].get<std::uint32_t>(),
                                p[1].get<std::uint64_t>(),
                                p[2].get<std::uint64_t>()});
  }
  LmstScenario scenario =
      build_scenario(std::move(positions), sc.at("rmaxSquared").get<std::uint64_t>());

  SpecBundle bundle;
  bundle.spec = std::move(scenario.spec);
  bundle.initial = std::move(scenario.initial);
  bundle.env_inputs = std::move(scenario.env_inputs);
  bundle.formulas = std::move(scenario.formulas);
  bundle.props = std::move(scenario.props);
  for (auto& [name, formula] : parse_formula_table(doc)) {
    if (bundle.formulas.count(name)) {
      throw SpecFileError("formula \"" + name + "\" clashes with a scenario formula");
    }
    bundle.formulas.emplace(name, std::move(formula));
  }
  return bundle;
}

}  // namespace

Value value_from_json_text(const std::string& text) {
  json j = json::parse(text);
  return value_from_json(j, "value");
}

Sort parse_sort(const std::string& text) {
  std::size_t at = 0;
  Sort s = parse_sort_at(text, at);
  while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) {
    ++at;
  }
  if (at != text.size()) {
    throw SpecFileError("trailing characters in sort \"" + text + "\"");
  }
  return s;
}

MachineRegistry builtin_registry() {
  MachineRegistry registry;
  register_gates(registry);
  register_lmst_machines(registry);
  return registry;
}

SpecBundle load_spec(const std::string& path) {
  return load_spec(path, builtin_registry());
}

SpecBundle load_spec(const std::string& path, const MachineRegistry& registry) {
  std::ifstream in(path);
  if (!in) {
    throw SpecFileError("cannot open spec file " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw SpecFileError(path + ": " + err.what());
  }

  SpecBundle bundle;
  if (doc.contains("scenario")) {
    bundle = load_scenario(doc);
  } else {
    if (!doc.contains("machines") || !doc.contains("environment") ||
        !doc.contains("wiring")) {
      throw SpecFileError(path + ": spec needs machines, environment and wiring");
    }
    for (const json& m : doc.at("machines")) {
      if (!m.contains("kind")) {
        throw SpecFileError(path + ": every machine needs a kind");
      }
      MachineParams params;
      if (m.contains("params")) {
        for (const auto& [key, value] : m.at("params").items()) {
          params[key] = value.get<std::uint64_t>();
        }
      }
      bundle.spec.machines.push_back(
          registry.make(m.at("kind").get<std::string>(), params));
    }

    const json& env = doc.at("environment");
    const std::size_t n_inputs = env.at("inputs").get<std::size_t>();
    const std::size_t n_outputs = env.at("outputs").get<std::size_t>();
    for (const json& s : env.at("inputSorts")) {
      bundle.spec.env.input_sorts.push_back(parse_sort(s.get<std::string>()));
    }
    for (const json& s : env.at("outputSorts")) {
      bundle.spec.env.output_sorts.push_back(parse_sort(s.get<std::string>()));
    }
    if (bundle.spec.env.input_sorts.size() != n_inputs ||
        bundle.spec.env.output_sorts.size() != n_outputs) {
      throw SpecFileError(path + ": environment sort lists do not match the port counts");
    }

    for (const auto& [to, from] : doc.at("wiring").items()) {
      bundle.spec.wiring.src[parse_port(to)] =
          parse_port(from.get<std::string>());
    }

    if (!doc.contains("initial")) {
      throw SpecFileError(path + ": spec needs an initial state");
    }
    const json& init = doc.at("initial");
    for (const json& v : init.at("machines")) {
      bundle.initial.machine_states.push_back(value_from_json(v, "initial.machines"));
    }
    if (init.contains("latches")) {
      for (const json& v : init.at("latches")) {
        bundle.initial.latched.push_back(value_from_json(v, "initial.latches"));
      }
    }

    const json& inputs = doc.contains("envInputs") ? doc.at("envInputs") : json{};
    const std::size_t width = bundle.spec.env.output_sorts.size();
    if (inputs.is_string() && inputs.get<std::string>() == "status-enum") {
      bundle.env_inputs = enumerate_env_inputs(static_cast<std::uint32_t>(width));
    } else if (inputs.is_string() && inputs.get<std::string>() == "bool-enum") {
      bundle.env_inputs = enumerate_bool_inputs(static_cast<std::uint32_t>(width));
    } else if (inputs.is_array()) {
      for (const json& v : inputs) {
        bundle.env_inputs.push_back(value_from_json(v, "envInputs"));
      }
      for (std::size_t i = 0; i < bundle.env_inputs.size(); ++i) {
        for (std::size_t j = i + 1; j < bundle.env_inputs.size(); ++j) {
          if (bundle.env_inputs[i] == bundle.env_inputs[j]) {
            throw SpecFileError(path + ": envInputs contains duplicates");
          }
        }
      }
    } else {
      throw SpecFileError(path +
                          ": envInputs must be \"status-enum\", \"bool-enum\" "
                          "or an explicit list");
    }
    if (bundle.env_inputs.empty()) {
      throw SpecFileError(path + ": envInputs must be non-empty");
    }
    bundle.formulas = parse_formula_table(doc);
  }

  ValidationReport report = validate(bundle.spec);
  if (!report.ok()) {
    throw InvalidSpecError(std::move(report));
  }

  // The initial state must fit the layout exactly.
  StateLayout layout = state_layout(bundle.spec);
  if (bundle.initial.machine_states.size() != layout.machine_state_sorts.size() ||
      bundle.initial.latched.size() != layout.latched.size()) {
    throw SpecFileError(path + ": initial state must provide " +
                        std::to_string(layout.machine_state_sorts.size()) +
                        " machine states and " +
                        std::to_string(layout.latched.size()) + " latches");
  }
  for (std::size_t i = 0; i < layout.machine_state_sorts.size(); ++i) {
    if (!bundle.initial.machine_states[i].conforms(layout.machine_state_sorts[i])) {
      throw SpecFileError(path + ": initial machine state " + std::to_string(i + 1) +
                          " does not conform to " +
                          layout.machine_state_sorts[i].str());
    }
  }
  for (std::size_t i = 0; i < layout.latched.size(); ++i) {
    if (!bundle.initial.latched[i].conforms(layout.latched[i].second)) {
      throw SpecFileError(path + ": initial latch " + std::to_string(i + 1) +
                          " (node " + layout.latched[i].first.str() +
                          ") does not conform to " + layout.latched[i].second.str());
    }
  }
  return bundle;
}

std::vector<Value> load_inputs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SpecFileError("cannot open inputs file " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw SpecFileError(path + ": " + err.what());
  }
  if (!doc.is_array()) {
    throw SpecFileError(path + ": inputs file must be an array of tuples");
  }
  std::vector<Value> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(value_from_json(doc[i], "inputs[" + std::to_string(i) + "]"));
  }
  return out;
}

namespace {

FormulaPtr expand_ast(const std::map<std::string, FormulaPtr>& table,
                      const FormulaPtr& f, std::set<std::string>& active);

FormulaPtr expand_name(const std::map<std::string, FormulaPtr>& table,
                       const std::string& name, std::set<std::string>& active) {
  auto it = table.find(name);
  if (it == table.end()) {
    throw std::invalid_argument("unknown formula: " + name);
  }
  // Identity entries map a proposition name to itself.
  if (it->second->op() == LtlOp::prop && it->second->prop_name() == name) {
    return it->second;
  }
  if (!active.insert(name).second) {
    throw std::invalid_argument("cyclic formula definition through \"" + name + "\"");
  }
  FormulaPtr expanded = expand_ast(table, it->second, active);
  active.erase(name);
  return expanded;
}

FormulaPtr expand_ast(const std::map<std::string, FormulaPtr>& table,
                      const FormulaPtr& f, std::set<std::string>& active) {
  if (f->op() == LtlOp::prop) {
    if (table.count(f->prop_name())) {
      return expand_name(table, f->prop_name(), active);
    }
    return f;
  }
  if (!f->lhs()) {
    return f;
  }
  FormulaPtr lhs = expand_ast(table, f->lhs(), active);
  FormulaPtr rhs = f->rhs() ? expand_ast(table, f->rhs(), active) : nullptr;
  return std::make_shared<const Formula>(f->op(), std::string{}, std::move(lhs),
                                         std::move(rhs));
}

}  // namespace

FormulaPtr expand_formula(const std::map<std::string, FormulaPtr>& table,
                          const std::string& name) {
  std::set<std::string> active;
  return expand_name(table, name, active);
}

}  // namespace syncomp
