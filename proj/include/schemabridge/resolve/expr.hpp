#pragma once

#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/schema.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace schemabridge {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace expr {

struct Get {
    Path path;
};
struct Const {
    json value;  // scalar only
};
enum class Op : char { Add = '+', Sub = '-', Mul = '*', Div = '/' };
struct Arith {
    Op op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct Call {
    std::string fn;
    std::vector<ExprPtr> args;
};

} // namespace expr

/// Node of the adapter transformation language. There are no loops,
/// bindings or side effects; every program terminates.
struct Expr {
    std::variant<expr::Get, expr::Const, expr::Arith, expr::Call> node;
};

[[nodiscard]] ExprPtr make_get(Path path);
[[nodiscard]] ExprPtr make_const(json value);
[[nodiscard]] ExprPtr make_arith(expr::Op op, ExprPtr lhs, ExprPtr rhs);
[[nodiscard]] ExprPtr make_call(std::string fn, std::vector<ExprPtr> args);

class ExprSyntaxError : public Error {
public:
    using Error::Error;
};

inline constexpr std::size_t kMaxExprDepth = 32;
inline constexpr std::size_t kMaxExprNodes = 256;

/// Tagged-tree JSON form:
///   {"kind":"get","path":"a.b"} | {"kind":"const","value":1}
///   {"kind":"arith","op":"+","lhs":E,"rhs":E} | {"kind":"call","fn":"round","args":[E,...]}
[[nodiscard]] json to_json(const Expr& e);
/// Throws ExprSyntaxError on unknown tags, bad shapes, or size limits.
[[nodiscard]] ExprPtr expr_from_json(const json& j);

/// Infix text form used in field-mapping transforms, e.g.
/// `round(kmh_to_mph($), 2)` or `$readings[].temperature / 10`.
/// `$` alone refers to `self` (the mapping's source field). An empty text
/// is the identity `$`.
[[nodiscard]] ExprPtr parse_expr(std::string_view text, const Path* self = nullptr);
[[nodiscard]] std::string render(const Expr& e);

/// Every Get path in `e`, in visit order.
void collect_paths(const Expr& e, std::vector<Path>& out);
[[nodiscard]] std::size_t node_count(const Expr& e);
[[nodiscard]] std::size_t depth(const Expr& e);

} // namespace schemabridge
