#include "schemabridge/resolve/adapter.hpp"

#include "schemabridge/core/validate.hpp"

#include <limits>
#include <set>

namespace schemabridge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json get_impl(const json& v, const std::vector<std::string>& segs, std::size_t i) {
    if (i == segs.size()) return v;
    if (Path::is_marker(segs[i])) {
        if (!v.is_array()) return nullptr;
        json out = json::array();
        for (const auto& e : v) out.push_back(get_impl(e, segs, i + 1));
        return out;
    }
    if (!v.is_object()) return nullptr;
    auto it = v.find(segs[i]);
    if (it == v.end()) return nullptr;
    return get_impl(*it, segs, i + 1);
}

void set_impl(json& node, const std::vector<std::string>& segs, std::size_t i, const json& value) {
    if (value.is_null()) return;
    if (i == segs.size()) {
        node = value;
        return;
    }
    if (Path::is_marker(segs[i])) {
        if (i + 1 == segs.size()) {
            node = value.is_array() ? value : json::array({value});
            return;
        }
        if (!value.is_array()) {
            throw EvalError("cannot distribute non-array value over array elements");
        }
        if (!node.is_array()) node = json::array();
        while (node.size() < value.size()) node.push_back(json::object());
        for (std::size_t k = 0; k < value.size(); ++k) set_impl(node[k], segs, i + 1, value[k]);
        return;
    }
    if (!node.is_object()) node = json::object();
    set_impl(node[segs[i]], segs, i + 1, value);
}

json arith(expr::Op op, const json& a, const json& b) {
    if (a.is_null() || b.is_null()) return nullptr;
    if (!a.is_number() || !b.is_number()) {
        throw EvalError(std::string("operator ") + static_cast<char>(op) + " needs numbers, got " + a.dump() + " and " +
                        b.dump());
    }
    if (op != expr::Op::Div && a.is_number_integer() && b.is_number_integer()) {
        const auto x = a.get<std::int64_t>();
        const auto y = b.get<std::int64_t>();
        std::int64_t r = 0;
        bool overflow = false;
        switch (op) {
        case expr::Op::Add: overflow = __builtin_add_overflow(x, y, &r); break;
        case expr::Op::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
        case expr::Op::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
        default: break;
        }
        if (overflow) throw EvalError("integer overflow");
        return r;
    }
    const double x = a.get<double>();
    const double y = b.get<double>();
    switch (op) {
    case expr::Op::Add: return x + y;
    case expr::Op::Sub: return x - y;
    case expr::Op::Mul: return x * y;
    case expr::Op::Div:
        if (y == 0.0) throw EvalError("division by zero");
        return x / y;
    }
    throw EvalError("unknown operator");
}

void check_expr(const Expr& e, const std::set<Path>& source_leaves, const std::string& where) {
    std::visit(overloaded{
                   [&](const expr::Get& g) {
                       if (!source_leaves.contains(g.path)) {
                           throw StaticViolation(where + ": $" + g.path.str() + " is not a source leaf");
                       }
                   },
                   [&](const expr::Const& c) {
                       if (c.value.is_structured()) throw StaticViolation(where + ": non-scalar constant");
                   },
                   [&](const expr::Arith& a) {
                       check_expr(*a.lhs, source_leaves, where);
                       check_expr(*a.rhs, source_leaves, where);
                   },
                   [&](const expr::Call& c) {
                       const auto* sig = find_builtin(c.fn);
                       if (sig == nullptr) {
                           throw StaticViolation(where + ": function '" + c.fn + "' is not whitelisted in " + render(e));
                       }
                       if (c.args.size() < sig->min_args || c.args.size() > sig->max_args) {
                           throw StaticViolation(where + ": wrong arity for " + render(e));
                       }
                       for (const auto& a : c.args) check_expr(*a, source_leaves, where);
                   },
               },
               e.node);
}

} // namespace

json get_path(const json& data, const Path& path) { return get_impl(data, path.segments(), 0); }

void set_path(json& root, const Path& path, const json& value) { set_impl(root, path.segments(), 0, value); }

json evaluate(const Expr& e, const json& data) {
    return std::visit(overloaded{
                          [&](const expr::Get& g) { return get_path(data, g.path); },
                          [](const expr::Const& c) { return c.value; },
                          [&](const expr::Arith& a) { return arith(a.op, evaluate(*a.lhs, data), evaluate(*a.rhs, data)); },
                          [&](const expr::Call& c) {
                              std::vector<json> args;
                              args.reserve(c.args.size());
                              for (const auto& a : c.args) args.push_back(evaluate(*a, data));
                              return call_builtin(c.fn, args);
                          },
                      },
                      e.node);
}

json execute_program(const AdapterProgram& p, const json& data) {
    json out = json::object();
    for (const auto& a : p.assignments) {
        set_path(out, a.target, evaluate(*a.expr, data));
    }
    return out;
}

json execute_adapter(const ValidatedAdapter& adapter, const json& data) { return execute_program(adapter.program(), data); }

json to_json(const AdapterProgram& p) {
    json list = json::array();
    for (const auto& a : p.assignments) {
        list.push_back({{"target", a.target.str()}, {"expr", to_json(*a.expr)}});
    }
    return {{"assignments", list}};
}

AdapterProgram adapter_from_json(const json& j) {
    if (!j.is_object() || !j.contains("assignments") || !j["assignments"].is_array()) {
        throw ExprSyntaxError("adapter program needs an 'assignments' array");
    }
    AdapterProgram p;
    for (const auto& a : j["assignments"]) {
        if (!a.is_object() || !a.contains("target") || !a["target"].is_string() || !a.contains("expr")) {
            throw ExprSyntaxError("assignment needs 'target' and 'expr': " + a.dump());
        }
        try {
            Path target = Path::parse(a["target"].get<std::string>());
            ExprPtr expr = expr_from_json(a["expr"]);
            p.assignments.push_back({std::move(target), std::move(expr)});
        } catch (const PathError& e) {
            throw ExprSyntaxError(e.what());
        }
    }
    return p;
}

void check_adapter_static(const AdapterProgram& p, const Schema& source, const Schema& target) {
    const auto source_leaves = leaf_paths(source);
    const auto target_leaves = leaf_paths(target);
    std::set<Path> seen;
    for (std::size_t i = 0; i < p.assignments.size(); ++i) {
        const auto& a = p.assignments[i];
        const std::string where = "assignment " + std::to_string(i) + " (" + a.target.str() + ")";
        if (!a.expr) throw StaticViolation(where + ": missing expression");
        if (!target_leaves.contains(a.target)) throw StaticViolation(where + ": not a target leaf");
        if (!seen.insert(a.target).second) throw StaticViolation(where + ": target assigned twice");
        if (depth(*a.expr) > kMaxExprDepth || node_count(*a.expr) > kMaxExprNodes) {
            throw StaticViolation(where + ": expression too large");
        }
        check_expr(*a.expr, source_leaves, where);
    }
}

ValidatedAdapter validate_adapter(AdapterProgram p, const Schema& source, const Schema& target, const json& sample) {
    check_adapter_static(p, source, target);
    json trial;
    try {
        trial = execute_program(p, sample);
    } catch (const EvalError& e) {
        throw TrialFailure(std::string("trial run failed: ") + e.what());
    }
    const auto violations = validate_instance(trial, target);
    if (!violations.empty()) {
        std::string msg = "trial output does not match target schema:";
        for (const auto& v : violations) msg += " " + v.path.str() + ": " + v.reason + ";";
        throw TrialFailure(msg);
    }
    return ValidatedAdapter(std::move(p));
}

ValidatedAdapter restore_adapter(AdapterProgram p, const Schema& source, const Schema& target) {
    check_adapter_static(p, source, target);
    return ValidatedAdapter(std::move(p));
}

} // namespace schemabridge
