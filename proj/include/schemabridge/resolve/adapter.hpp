#pragma once

#include "schemabridge/resolve/builtins.hpp"
#include "schemabridge/resolve/expr.hpp"

#include <vector>

namespace schemabridge {

struct Assignment {
    Path target;
    ExprPtr expr;
};

/// Ordered target-leaf assignments. Serialised as
/// {"assignments":[{"target":"dotted.path","expr":<tagged tree>}]}.
struct AdapterProgram {
    std::vector<Assignment> assignments;
};

[[nodiscard]] json to_json(const AdapterProgram& p);
/// Throws ExprSyntaxError on a malformed document.
[[nodiscard]] AdapterProgram adapter_from_json(const json& j);

class StaticViolation : public Error {
public:
    using Error::Error;
};

class TrialFailure : public Error {
public:
    using Error::Error;
};

/// An adapter that passed static checks against a schema pair and, when it
/// was built from a sample, a trial run. Only `validate_adapter` and
/// `restore_adapter` create one.
class ValidatedAdapter {
public:
    [[nodiscard]] const AdapterProgram& program() const noexcept { return program_; }

private:
    explicit ValidatedAdapter(AdapterProgram p) : program_(std::move(p)) {}
    AdapterProgram program_;

    friend ValidatedAdapter validate_adapter(AdapterProgram, const Schema&, const Schema&, const json&);
    friend ValidatedAdapter restore_adapter(AdapterProgram, const Schema&, const Schema&);
};

/// Whitelist, arity, size limits, source and target path existence.
/// Throws StaticViolation naming the offending expression.
void check_adapter_static(const AdapterProgram& p, const Schema& source, const Schema& target);

/// Static checks, then a trial run on `sample` whose output must validate
/// against `target`. Throws StaticViolation or TrialFailure.
[[nodiscard]] ValidatedAdapter validate_adapter(AdapterProgram p, const Schema& source, const Schema& target,
                                                const json& sample);

/// Static checks only; used when reloading a persisted cache.
[[nodiscard]] ValidatedAdapter restore_adapter(AdapterProgram p, const Schema& source, const Schema& target);

/// Pure, deterministic. Throws EvalError.
[[nodiscard]] json execute_adapter(const ValidatedAdapter& adapter, const json& data);

/// Interprets any program without validation. Throws EvalError.
[[nodiscard]] json execute_program(const AdapterProgram& p, const json& data);
[[nodiscard]] json evaluate(const Expr& e, const json& data);

/// Value at `path`; a marker segment maps over array elements. Absent
/// fields yield null.
[[nodiscard]] json get_path(const json& data, const Path& path);

/// Writes `value` at `path`, creating intermediate objects. A marker
/// segment followed by more segments distributes an array value over
/// the elements. A null value leaves the document untouched.
void set_path(json& root, const Path& path, const json& value);

} // namespace schemabridge
