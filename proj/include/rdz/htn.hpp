#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdz::htn {

// Domain-independent hierarchical task network planner. Compound tasks are
// refined by methods, tried in registration order, into ordered subtask
// lists; primitives carry an applicability predicate and a state effect.
// Search is depth-first over the task agenda with chronological
// backtracking, so planning is deterministic for a fixed domain.

template <class Arg>
struct Task {
  std::string name;
  std::vector<Arg> args;
};

template <class Arg>
Task<Arg> task(std::string name, std::vector<Arg> args = {}) {
  return {std::move(name), std::move(args)};
}

enum class PlanStatus { found, no_plan, depth_limit };

enum class AttemptOutcome { chosen, not_applicable, dead_end };

// Decomposition record. Nodes live in an arena; failed method attempts stay
// recorded so the rendering can show rejected branches.
template <class Arg>
struct Trace {
  struct Attempt {
    std::string method;
    AttemptOutcome outcome = AttemptOutcome::dead_end;
    std::vector<std::size_t> children;
  };
  struct Node {
    Task<Arg> task;
    bool is_primitive = false;
    bool in_plan = false;  // primitives that made the final plan
    std::vector<Attempt> attempts;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> roots;
};

template <class Arg>
struct Plan {
  std::vector<Task<Arg>> actions;  // grounded primitives, in order
  Trace<Arg> trace;
};

template <class Arg>
struct PlanResult {
  PlanStatus status = PlanStatus::no_plan;
  Plan<Arg> plan;  // meaningful only when status == found

  bool found() const { return status == PlanStatus::found; }
};

template <class State, class Arg>
class Domain {
 public:
  using Args = std::vector<Arg>;
  using Predicate = std::function<bool(const State&, const Args&)>;
  using Effect = std::function<void(State&, const Args&)>;
  using Expansion =
      std::function<std::vector<Task<Arg>>(const State&, const Args&)>;

  struct Primitive {
    Predicate applicable;
    Effect apply;
  };
  struct Method {
    std::string label;
    Predicate applicable;
    Expansion decompose;
  };

  void add_primitive(const std::string& name, Predicate applicable,
                     Effect apply) {
    ensure_unregistered(name);
    primitives_[name] = Primitive{std::move(applicable), std::move(apply)};
  }

  // Methods for one task run in registration order.
  void add_method(const std::string& task, std::string label,
                  Predicate applicable, Expansion decompose) {
    if (primitives_.count(task))
      throw std::invalid_argument(task + " is already a primitive");
    methods_[task].push_back(
        Method{std::move(label), std::move(applicable), std::move(decompose)});
  }

  bool is_primitive(const std::string& name) const {
    return primitives_.count(name) != 0;
  }
  bool is_compound(const std::string& name) const {
    return methods_.count(name) != 0;
  }

  const Primitive& primitive(const std::string& name) const {
    return primitives_.at(name);
  }
  const std::vector<Method>& methods(const std::string& name) const {
    return methods_.at(name);
  }

 private:
  void ensure_unregistered(const std::string& name) const {
    if (primitives_.count(name) || methods_.count(name))
      throw std::invalid_argument(name + " is already registered");
  }

  std::map<std::string, Primitive> primitives_;
  std::map<std::string, std::vector<Method>> methods_;
};

namespace detail {

template <class State, class Arg>
class Search {
 public:
  Search(const Domain<State, Arg>& domain, int depth_limit)
      : domain_(domain), depth_limit_(depth_limit) {}

  struct Item {
    Task<Arg> task;
    std::size_t node;
  };

  PlanResult<Arg> run(const State& state, const std::vector<Task<Arg>>& todo) {
    std::vector<Item> agenda;
    agenda.reserve(todo.size());
    for (const Task<Arg>& t : todo) {
      trace_.nodes.push_back({t, domain_.is_primitive(t.name), false, {}});
      trace_.roots.push_back(trace_.nodes.size() - 1);
      agenda.push_back({t, trace_.nodes.size() - 1});
    }
    PlanResult<Arg> result;
    if (seek(state, agenda, 0)) {
      result.status = PlanStatus::found;
      result.plan.actions = std::move(actions_);
      result.plan.trace = std::move(trace_);
    } else {
      result.status =
          depth_exceeded_ ? PlanStatus::depth_limit : PlanStatus::no_plan;
    }
    return result;
  }

 private:
  bool seek(const State& state, const std::vector<Item>& agenda, int depth) {
    if (agenda.empty()) return true;
    if (depth > depth_limit_) {
      depth_exceeded_ = true;
      return false;
    }

    const Item& head = agenda.front();
    const std::vector<Item> rest(agenda.begin() + 1, agenda.end());
    const std::string& name = head.task.name;

    if (domain_.is_primitive(name)) {
      const auto& prim = domain_.primitive(name);
      if (!prim.applicable(state, head.task.args)) return false;
      State next = state;
      prim.apply(next, head.task.args);
      actions_.push_back(head.task);
      if (seek(next, rest, depth + 1)) {
        trace_.nodes[head.node].in_plan = true;
        return true;
      }
      actions_.pop_back();
      return false;
    }

    if (!domain_.is_compound(name))
      throw std::invalid_argument("unregistered task: " + name);

    for (const auto& method : domain_.methods(name)) {
      auto& attempts = trace_.nodes[head.node].attempts;
      attempts.push_back({method.label, AttemptOutcome::dead_end, {}});
      const std::size_t attempt_index = attempts.size() - 1;
      if (!method.applicable(state, head.task.args)) {
        trace_.nodes[head.node].attempts[attempt_index].outcome =
            AttemptOutcome::not_applicable;
        continue;
      }
      const std::vector<Task<Arg>> subtasks =
          method.decompose(state, head.task.args);
      std::vector<Item> next_agenda;
      next_agenda.reserve(subtasks.size() + rest.size());
      for (const Task<Arg>& sub : subtasks) {
        trace_.nodes.push_back({sub, domain_.is_primitive(sub.name), false, {}});
        trace_.nodes[head.node].attempts[attempt_index].children.push_back(
            trace_.nodes.size() - 1);
        next_agenda.push_back({sub, trace_.nodes.size() - 1});
      }
      next_agenda.insert(next_agenda.end(), rest.begin(), rest.end());
      if (seek(state, next_agenda, depth + 1)) {
        trace_.nodes[head.node].attempts[attempt_index].outcome =
            AttemptOutcome::chosen;
        return true;
      }
    }
    return false;
  }

  const Domain<State, Arg>& domain_;
  int depth_limit_;
  bool depth_exceeded_ = false;
  std::vector<Task<Arg>> actions_;
  Trace<Arg> trace_;
};

}  // namespace detail

// Depth-first search over the ordered task list; returns the first complete
// plan, a no_plan failure, or depth_limit when the limit pruned the search.
// Throws std::invalid_argument on unregistered task names.
template <class State, class Arg>
PlanResult<Arg> find_plan(const State& state, const std::vector<Task<Arg>>& todo,
                          const Domain<State, Arg>& domain,
                          int depth_limit = 1000) {
  if (depth_limit <= 0)
    throw std::invalid_argument("depth_limit must be positive");
  detail::Search<State, Arg> search(domain, depth_limit);
  return search.run(state, todo);
}

template <class State>
struct ReplayResult {
  bool ok = true;
  std::size_t failed_index = 0;  // valid when !ok
  State state;
};

// Re-executes a plan, checking applicability at every step. Used as the
// soundness oracle for the planner and as the guard at execution time.
template <class State, class Arg>
ReplayResult<State> replay(const Plan<Arg>& plan, State state,
                           const Domain<State, Arg>& domain) {
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const Task<Arg>& action = plan.actions[i];
    if (!domain.is_primitive(action.name))
      throw std::invalid_argument("plan contains non-primitive: " +
                                  action.name);
    const auto& prim = domain.primitive(action.name);
    if (!prim.applicable(state, action.args))
      return {false, i, std::move(state)};
    prim.apply(state, action.args);
  }
  return {true, 0, std::move(state)};
}

namespace detail {

template <class Arg>
void render_node(const Trace<Arg>& trace, std::size_t id, int indent,
                 const std::function<std::string(const Arg&)>& fmt,
                 std::ostringstream& out) {
  const auto& node = trace.nodes[id];
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  if (node.is_primitive) {
    out << "! " << node.task.name;
    if (!node.task.args.empty()) {
      out << "(";
      for (std::size_t i = 0; i < node.task.args.size(); ++i)
        out << (i ? ", " : "") << fmt(node.task.args[i]);
      out << ")";
    }
    if (!node.in_plan) out << "  [rejected]";
    out << '\n';
    return;
  }
  out << node.task.name << '\n';
  for (const auto& attempt : node.attempts) {
    out << std::string(static_cast<std::size_t>(indent) * 2 + 2, ' ');
    out << "- method " << attempt.method;
    switch (attempt.outcome) {
      case AttemptOutcome::chosen: break;
      case AttemptOutcome::not_applicable: out << "  [rejected: not applicable]"; break;
      case AttemptOutcome::dead_end: out << "  [rejected: dead end]"; break;
    }
    out << '\n';
    for (std::size_t child : attempt.children)
      render_node(trace, child, indent + 2, fmt, out);
  }
}

}  // namespace detail

// Human-readable decomposition tree: every task, the method that refined it
// (rejected attempts marked), and the emitted primitive actions.
template <class Arg>
std::string render_trace(
    const Plan<Arg>& plan,
    const std::function<std::string(const Arg&)>& fmt =
        [](const Arg&) { return std::string("_"); }) {
  std::ostringstream out;
  for (std::size_t root : plan.trace.roots)
    detail::render_node(plan.trace, root, 0, fmt, out);
  return out.str();
}

}  // namespace rdz::htn
