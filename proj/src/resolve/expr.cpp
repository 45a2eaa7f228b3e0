#include "schemabridge/resolve/expr.hpp"

#include <cctype>
#include <charconv>

namespace schemabridge {

ExprPtr make_get(Path path) { return std::make_shared<const Expr>(Expr{expr::Get{std::move(path)}}); }
ExprPtr make_const(json value) { return std::make_shared<const Expr>(Expr{expr::Const{std::move(value)}}); }
ExprPtr make_arith(expr::Op op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<const Expr>(Expr{expr::Arith{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_call(std::string fn, std::vector<ExprPtr> args) {
    return std::make_shared<const Expr>(Expr{expr::Call{std::move(fn), std::move(args)}});
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::optional<expr::Op> op_from_string(std::string_view s) {
    if (s == "+") return expr::Op::Add;
    if (s == "-") return expr::Op::Sub;
    if (s == "*" || s == "×") return expr::Op::Mul;
    if (s == "/" || s == "÷") return expr::Op::Div;
    return std::nullopt;
}

ExprPtr from_json_impl(const json& j, std::size_t level, std::size_t& nodes) {
    if (level > kMaxExprDepth) throw ExprSyntaxError("expression nested deeper than " + std::to_string(kMaxExprDepth));
    if (++nodes > kMaxExprNodes) throw ExprSyntaxError("expression has more than " + std::to_string(kMaxExprNodes) + " nodes");
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw ExprSyntaxError("expression node must be an object with a string 'kind': " + j.dump());
    }
    const auto kind = j["kind"].get<std::string>();
    if (kind == "get") {
        if (!j.contains("path") || !j["path"].is_string()) throw ExprSyntaxError("get node needs a string 'path'");
        try {
            return make_get(Path::parse(j["path"].get<std::string>()));
        } catch (const PathError& e) {
            throw ExprSyntaxError(e.what());
        }
    }
    if (kind == "const") {
        if (!j.contains("value") || j["value"].is_structured()) throw ExprSyntaxError("const node needs a scalar 'value'");
        return make_const(j["value"]);
    }
    if (kind == "arith") {
        if (!j.contains("op") || !j["op"].is_string()) throw ExprSyntaxError("arith node needs a string 'op'");
        auto op = op_from_string(j["op"].get<std::string>());
        if (!op) throw ExprSyntaxError("unknown arithmetic operator " + j["op"].dump());
        if (!j.contains("lhs") || !j.contains("rhs")) throw ExprSyntaxError("arith node needs 'lhs' and 'rhs'");
        return make_arith(*op, from_json_impl(j["lhs"], level + 1, nodes), from_json_impl(j["rhs"], level + 1, nodes));
    }
    if (kind == "call") {
        if (!j.contains("fn") || !j["fn"].is_string()) throw ExprSyntaxError("call node needs a string 'fn'");
        std::vector<ExprPtr> args;
        if (auto it = j.find("args"); it != j.end()) {
            if (!it->is_array()) throw ExprSyntaxError("call 'args' must be an array");
            for (const auto& a : *it) args.push_back(from_json_impl(a, level + 1, nodes));
        }
        return make_call(j["fn"].get<std::string>(), std::move(args));
    }
    throw ExprSyntaxError("unknown expression kind '" + kind + "'");
}

class Parser {
public:
    Parser(std::string_view text, const Path* self) : text_(text), self_(self) {}

    ExprPtr parse() {
        skip_ws();
        if (pos_ == text_.size()) {
            if (self_ == nullptr) throw ExprSyntaxError("empty expression");
            return make_get(*self_);
        }
        auto e = parse_sum(0);
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ExprSyntaxError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void guard(std::size_t level) {
        if (level > kMaxExprDepth) fail("expression nested too deeply");
        if (++nodes_ > kMaxExprNodes) fail("expression too large");
    }

    ExprPtr parse_sum(std::size_t level) {
        guard(level);
        auto lhs = parse_product(level + 1);
        for (;;) {
            if (accept('+')) {
                lhs = make_arith(expr::Op::Add, lhs, parse_product(level + 1));
            } else if (accept('-')) {
                lhs = make_arith(expr::Op::Sub, lhs, parse_product(level + 1));
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_product(std::size_t level) {
        guard(level);
        auto lhs = parse_unary(level + 1);
        for (;;) {
            if (accept('*')) {
                lhs = make_arith(expr::Op::Mul, lhs, parse_unary(level + 1));
            } else if (accept('/')) {
                lhs = make_arith(expr::Op::Div, lhs, parse_unary(level + 1));
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_unary(std::size_t level) {
        guard(level);
        if (accept('-')) {
            auto operand = parse_unary(level + 1);
            if (const auto* c = std::get_if<expr::Const>(&operand->node); c != nullptr && c->value.is_number()) {
                if (c->value.is_number_integer()) return make_const(-c->value.get<std::int64_t>());
                return make_const(-c->value.get<double>());
            }
            return make_arith(expr::Op::Sub, make_const(0), operand);
        }
        return parse_primary(level + 1);
    }

    ExprPtr parse_primary(std::size_t level) {
        guard(level);
        skip_ws();
        if (pos_ == text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum(level + 1);
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == '"') return parse_string();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == '$') return parse_path();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const auto start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string ident(text_.substr(start, pos_ - start));
            if (accept('(')) {
                std::vector<ExprPtr> args;
                if (!accept(')')) {
                    do {
                        args.push_back(parse_sum(level + 1));
                    } while (accept(','));
                    if (!accept(')')) fail("expected ')' after arguments");
                }
                return make_call(ident, std::move(args));
            }
            if (ident == "true") return make_const(true);
            if (ident == "false") return make_const(false);
            if (ident == "null") return make_const(nullptr);
            fail("unknown identifier '" + ident + "' (field references start with '$')");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_string() {
        const auto start = pos_++;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') ++pos_;
            ++pos_;
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        try {
            return make_const(json::parse(text_.substr(start, pos_ - start)));
        } catch (const json::parse_error&) {
            fail("invalid string literal");
        }
    }

    ExprPtr parse_number() {
        const auto start = pos_;
        bool is_float = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' || c == 'e' || c == 'E') {
                is_float = true;
                ++pos_;
                if ((c == 'e' || c == 'E') && pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            } else {
                break;
            }
        }
        const std::string_view lit = text_.substr(start, pos_ - start);
        if (!is_float) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), v);
            if (ec == std::errc() && p == lit.data() + lit.size()) return make_const(v);
        }
        try {
            std::size_t used = 0;
            const double d = std::stod(std::string(lit), &used);
            if (used != lit.size()) fail("invalid number");
            return make_const(d);
        } catch (const std::logic_error&) {
            fail("invalid number");
        }
    }

    ExprPtr parse_path() {
        ++pos_;  // '$'
        const auto start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) {
            if (self_ == nullptr) fail("'$' used where no source field is bound");
            return make_get(*self_);
        }
        try {
            return make_get(Path::parse(text_.substr(start, pos_ - start)));
        } catch (const PathError& e) {
            fail(e.what());
        }
    }

    std::string_view text_;
    const Path* self_;
    std::size_t pos_ = 0;
    std::size_t nodes_ = 0;
};

} // namespace

json to_json(const Expr& e) {
    return std::visit(overloaded{
                          [](const expr::Get& g) { return json{{"kind", "get"}, {"path", g.path.str()}}; },
                          [](const expr::Const& c) { return json{{"kind", "const"}, {"value", c.value}}; },
                          [](const expr::Arith& a) {
                              return json{{"kind", "arith"},
                                          {"op", std::string(1, static_cast<char>(a.op))},
                                          {"lhs", to_json(*a.lhs)},
                                          {"rhs", to_json(*a.rhs)}};
                          },
                          [](const expr::Call& c) {
                              json args = json::array();
                              for (const auto& a : c.args) args.push_back(to_json(*a));
                              return json{{"kind", "call"}, {"fn", c.fn}, {"args", args}};
                          },
                      },
                      e.node);
}

ExprPtr expr_from_json(const json& j) {
    std::size_t nodes = 0;
    return from_json_impl(j, 0, nodes);
}

ExprPtr parse_expr(std::string_view text, const Path* self) { return Parser(text, self).parse(); }

std::string render(const Expr& e) {
    return std::visit(overloaded{
                          [](const expr::Get& g) { return "$" + g.path.str(); },
                          [](const expr::Const& c) { return c.value.dump(); },
                          [](const expr::Arith& a) {
                              return "(" + render(*a.lhs) + " " + std::string(1, static_cast<char>(a.op)) + " " +
                                     render(*a.rhs) + ")";
                          },
                          [](const expr::Call& c) {
                              std::string out = c.fn + "(";
                              for (std::size_t i = 0; i < c.args.size(); ++i) {
                                  if (i > 0) out += ", ";
                                  out += render(*c.args[i]);
                              }
                              return out + ")";
                          },
                      },
                      e.node);
}

void collect_paths(const Expr& e, std::vector<Path>& out) {
    std::visit(overloaded{
                   [&](const expr::Get& g) { out.push_back(g.path); },
                   [](const expr::Const&) {},
                   [&](const expr::Arith& a) {
                       collect_paths(*a.lhs, out);
                       collect_paths(*a.rhs, out);
                   },
                   [&](const expr::Call& c) {
                       for (const auto& a : c.args) collect_paths(*a, out);
                   },
               },
               e.node);
}

std::size_t node_count(const Expr& e) {
    return std::visit(overloaded{
                          [](const expr::Get&) -> std::size_t { return 1; },
                          [](const expr::Const&) -> std::size_t { return 1; },
                          [](const expr::Arith& a) { return 1 + node_count(*a.lhs) + node_count(*a.rhs); },
                          [](const expr::Call& c) {
                              std::size_t n = 1;
                              for (const auto& a : c.args) n += node_count(*a);
                              return n;
                          },
                      },
                      e.node);
}

std::size_t depth(const Expr& e) {
    return std::visit(overloaded{
                          [](const expr::Get&) -> std::size_t { return 1; },
                          [](const expr::Const&) -> std::size_t { return 1; },
                          [](const expr::Arith& a) { return 1 + std::max(depth(*a.lhs), depth(*a.rhs)); },
                          [](const expr::Call& c) {
                              std::size_t d = 0;
                              for (const auto& a : c.args) d = std::max(d, depth(*a));
                              return 1 + d;
                          },
                      },
                      e.node);
}

} // namespace schemabridge
