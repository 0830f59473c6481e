#include "syncomp/machine.hpp"

namespace syncomp {

namespace {

void check_tuple_against(const Value& v, const std::vector<Sort>& sorts,
                         const char* what) {
  if (v.kind() != ValueKind::tuple || v.arity() != sorts.size()) {
    throw SortError(std::string("ill-sorted machine ") + what + ": " + v.str());
  }
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (!v.elems()[i].conforms(sorts[i])) {
      throw SortError(std::string("ill-sorted machine ") + what + ": component " +
                      std::to_string(i + 1) + " of " + v.str() +
                      " does not conform to " + sorts[i].str());
    }
  }
}

}  // namespace

std::pair<Value, Value> step_machine(const MachineDef& m, const Value& input,
                                     const Value& state, bool check_sorts) {
  if (check_sorts) {
    check_tuple_against(input, m.sig.input_sorts, "input");
    if (!state.conforms(m.sig.state_sort)) {
      throw SortError("ill-sorted machine state: " + state.str() +
                      " does not conform to " + m.sig.state_sort.str());
    }
  }
  Value next = m.next_state(input, state);
  Value out = m.output(input, state);
  if (check_sorts) {
    if (!next.conforms(m.sig.state_sort)) {
      throw SortError("machine " + m.name + " produced ill-sorted state " +
                      next.str());
    }
    check_tuple_against(out, m.sig.output_sorts, "output");
  }
  return {std::move(next), std::move(out)};
}

MachineDef make_xor2() {
  MachineDef def;
  def.name = "xor2";
  def.sig.input_sorts = {Sort::boolean(), Sort::boolean()};
  def.sig.state_sort = Sort::unit();
  def.sig.output_sorts = {Sort::boolean()};
  def.next_state = [](const Value&, const Value&) { return Value::star(); };
  def.output = [](const Value& in, const Value&) {
    bool a = project(in, 1).as_bool();
    bool b = project(in, 2).as_bool();
    return Value::tuple({Value::boolean(a != b)});
  };
  return def;
}

MachineDef make_and2() {
  MachineDef def;
  def.name = "and2";
  def.sig.input_sorts = {Sort::boolean(), Sort::boolean()};
  def.sig.state_sort = Sort::unit();
  def.sig.output_sorts = {Sort::boolean()};
  def.next_state = [](const Value&, const Value&) { return Value::star(); };
  def.output = [](const Value& in, const Value&) {
    bool a = project(in, 1).as_bool();
    bool b = project(in, 2).as_bool();
    return Value::tuple({Value::boolean(a && b)});
  };
  return def;
}

MachineDef make_identity(Sort value_sort) {
  MachineDef def;
  def.name = "identity";
  def.sig.input_sorts = {value_sort};
  def.sig.state_sort = Sort::unit();
  def.sig.output_sorts = {std::move(value_sort)};
  def.next_state = [](const Value&, const Value&) { return Value::star(); };
  def.output = [](const Value& in, const Value&) {
    return Value::tuple({project(in, 1)});
  };
  return def;
}

void MachineRegistry::add(std::string name, MachineFactory factory) {
  factories_[std::move(name)] = std::move(factory);
}

bool MachineRegistry::contains(const std::string& name) const {
  return factories_.count(name) != 0;
}

MachineDef MachineRegistry::make(const std::string& name,
                                 const MachineParams& params) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) {
    throw UnknownMachineError("unknown machine kind: " + name);
  }
  return it->second(params);
}

std::vector<std::string> MachineRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(factories_.size());
  for (const auto& [name, factory] : factories_) {
    out.push_back(name);
  }
  return out;
}

void register_gates(MachineRegistry& registry) {
  registry.add("xor2", [](const MachineParams&) { return make_xor2(); });
  registry.add("and2", [](const MachineParams&) { return make_and2(); });
}

}  // namespace syncomp
