#include "ocm/config.hpp"

#include "ocm/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace ocm {

namespace {

struct Value {
    enum class Kind { Number, String, Array } kind = Kind::Number;
    double number = 0.0;
    bool integer = false;
    std::string text;
    std::vector<Value> items;
    std::size_t line = 0;
    std::size_t column = 0;  // 0-based start of the content
};

class LineParser {
public:
    LineParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }
    std::size_t pos() const { return pos_; }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) error("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c) error(std::string("expected '") + c + "'");
        ++pos_;
    }

    Value value() {
        skip_ws();
        if (pos_ >= s_.size()) error("missing value");
        char c = s_[pos_];
        if (c == '[') return array();
        if (c == '"') return string();
        return number();
    }

    [[noreturn]] void error(const std::string& what) const {
        throw ConfigError(line_, what + " (column " + std::to_string(pos_ + 1) + ")");
    }

private:
    Value array() {
        Value v;
        v.kind = Value::Kind::Array;
        v.line = line_;
        v.column = pos_;
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return v;
        }
        for (;;) {
            v.items.push_back(value());
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
                continue;
            }
            expect(']');
            return v;
        }
    }

    Value string() {
        Value v;
        v.kind = Value::Kind::String;
        v.line = line_;
        ++pos_;
        v.column = pos_;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
            v.text += s_[pos_++];
        }
        if (pos_ >= s_.size()) error("unterminated string");
        ++pos_;
        return v;
    }

    Value number() {
        Value v;
        v.line = line_;
        v.column = pos_;
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                    s_[pos_] == '-' || s_[pos_] == '+'))
            ++pos_;
        std::string_view tok = s_.substr(start, pos_ - start);
        if (tok.empty()) error("expected a value");
        const char* b = tok.data();
        const char* e = b + tok.size();
        if (*b == '+') ++b;
        auto r = std::from_chars(b, e, v.number);
        if (r.ec != std::errc() || r.ptr != e) error("malformed number '" + std::string(tok) + "'");
        v.integer = tok.find_first_of(".eE") == std::string_view::npos;
        return v;
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

using Section = std::map<std::string, Value>;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"domain", {"lower", "upper", "cells"}},
    {"system", {"n", "K", "m", "equations", "rhs"}},
    {"solve", {"epsilon", "refine_steps", "samples_per_cell", "margin", "seed", "eta", "lattice"}},
};

struct Reader {
    std::map<std::string, Section> sections;
    std::map<std::string, std::size_t> section_line;

    const Value* find(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    const Value& need(const std::string& sec, const std::string& key) const {
        const Value* v = find(sec, key);
        if (!v) {
            auto l = section_line.find(sec);
            throw ConfigError(l == section_line.end() ? 0 : l->second, "missing key '" + key + "' in [" + sec + "]");
        }
        return *v;
    }
};

double as_number(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::Number) throw ConfigError(v.line, "'" + key + "' must be a number");
    return v.number;
}

std::uint64_t as_count(const Value& v, const std::string& key) {
    double d = as_number(v, key);
    if (!v.integer || d < 0 || d > 9.007199254740992e15) throw ConfigError(v.line, "'" + key + "' must be a nonnegative integer");
    return static_cast<std::uint64_t>(d);
}

const std::vector<Value>& as_array(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::Array) throw ConfigError(v.line, "'" + key + "' must be an array");
    return v.items;
}

std::vector<double> numbers(const Value& v, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : as_array(v, key)) out.push_back(as_number(item, key));
    return out;
}

std::vector<std::size_t> counts(const Value& v, const std::string& key) {
    std::vector<std::size_t> out;
    for (const auto& item : as_array(v, key)) out.push_back(static_cast<std::size_t>(as_count(item, key)));
    return out;
}

std::vector<SourceText> strings(const Value& v, const std::string& key) {
    std::vector<SourceText> out;
    for (const auto& item : as_array(v, key)) {
        if (item.kind != Value::Kind::String) throw ConfigError(item.line, "'" + key + "' entries must be strings");
        out.push_back({item.text, item.line, item.column});
    }
    return out;
}

} // namespace

ProblemConfig parse_config(std::string_view text) {
    Reader r;
    std::string current;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++lineno;
        LineParser p(line, lineno);
        if (p.at_end()) {
            if (end == text.size()) break;
            continue;
        }
        p.skip_ws();
        if (line[p.pos()] == '[') {
            p.expect('[');
            current = p.identifier();
            p.expect(']');
            if (!p.at_end()) p.error("unexpected text after section header");
            if (!kSchema.count(current)) throw ConfigError(lineno, "unknown section [" + current + "]");
            if (r.section_line.count(current)) throw ConfigError(lineno, "duplicate section [" + current + "]");
            r.section_line[current] = lineno;
            r.sections[current];
        } else {
            std::string key = p.identifier();
            if (current.empty()) throw ConfigError(lineno, "key '" + key + "' outside a section");
            if (!kSchema.at(current).count(key)) throw ConfigError(lineno, "unknown key '" + key + "' in [" + current + "]");
            p.expect('=');
            Value v = p.value();
            if (!p.at_end()) p.error("unexpected text after value");
            if (!r.sections[current].emplace(key, std::move(v)).second)
                throw ConfigError(lineno, "duplicate key '" + key + "'");
        }
        if (end == text.size()) break;
    }

    ProblemConfig c;
    const Value& n = r.need("system", "n");
    const Value& K = r.need("system", "K");
    const Value& m = r.need("system", "m");
    c.n = static_cast<int>(as_count(n, "n"));
    c.K = static_cast<int>(as_count(K, "K"));
    c.m = static_cast<int>(as_count(m, "m"));
    if (c.n < 1 || c.n > 8) throw ConfigError(n.line, "n must lie in [1, 8]");
    if (c.K < 1) throw ConfigError(K.line, "K must be >= 1");
    if (c.m > 8) throw ConfigError(m.line, "m must lie in [0, 8]");
    const Value& eq = r.need("system", "equations");
    const Value& rhs = r.need("system", "rhs");
    c.equations = strings(eq, "equations");
    c.rhs = strings(rhs, "rhs");
    if (c.equations.size() != static_cast<std::size_t>(c.K))
        throw ConfigError(eq.line, "expected K = " + std::to_string(c.K) + " equations");
    if (c.rhs.size() != static_cast<std::size_t>(c.K))
        throw ConfigError(rhs.line, "expected K = " + std::to_string(c.K) + " right-hand sides");

    const std::size_t dim = static_cast<std::size_t>(c.n);
    const Value& lo = r.need("domain", "lower");
    const Value& hi = r.need("domain", "upper");
    c.lower = numbers(lo, "lower");
    c.upper = numbers(hi, "upper");
    if (c.lower.size() != dim) throw ConfigError(lo.line, "'lower' needs n entries");
    if (c.upper.size() != dim) throw ConfigError(hi.line, "'upper' needs n entries");
    for (std::size_t d = 0; d < dim; ++d)
        if (!(c.lower[d] < c.upper[d])) throw ConfigError(hi.line, "degenerate box: lower must be < upper on every axis");
    if (const Value* cells = r.find("domain", "cells")) {
        c.cells = counts(*cells, "cells");
        if (c.cells.size() != dim) throw ConfigError(cells->line, "'cells' needs n entries");
        for (auto k : c.cells)
            if (k < 1) throw ConfigError(cells->line, "'cells' entries must be >= 1");
    } else {
        c.cells.assign(dim, 1);
    }

    const Value& eps = r.need("solve", "epsilon");
    c.epsilon = as_number(eps, "epsilon");
    if (!(c.epsilon > 0.0)) throw ConfigError(eps.line, "epsilon must be > 0");
    if (const Value* v = r.find("solve", "refine_steps")) {
        c.refine_steps = as_count(*v, "refine_steps");
        if (c.refine_steps < 1) throw ConfigError(v->line, "refine_steps must be >= 1");
    }
    if (const Value* v = r.find("solve", "samples_per_cell")) {
        c.samples_per_cell = as_count(*v, "samples_per_cell");
        if (c.samples_per_cell < 1) throw ConfigError(v->line, "samples_per_cell must be >= 1");
    }
    if (const Value* v = r.find("solve", "margin")) {
        c.margin = as_number(*v, "margin");
        if (!(c.margin > 0.0 && c.margin < 0.5)) throw ConfigError(v->line, "margin must lie in (0, 0.5)");
    }
    if (const Value* v = r.find("solve", "seed")) c.seed = as_count(*v, "seed");
    if (const Value* v = r.find("solve", "eta")) {
        c.eta = as_number(*v, "eta");
        if (!(c.eta >= 0.0)) throw ConfigError(v->line, "eta must be >= 0");
    }
    if (const Value* v = r.find("solve", "lattice")) {
        c.lattice = counts(*v, "lattice");
        if (c.lattice.size() != dim) throw ConfigError(v->line, "'lattice' needs n entries");
        for (auto k : c.lattice)
            if (k < 2) throw ConfigError(v->line, "'lattice' entries must be >= 2");
    } else {
        c.lattice.assign(dim, dim == 1 ? 201 : dim == 2 ? 41 : 11);
    }
    return c;
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Problem build_problem(const ProblemConfig& c) {
    std::vector<Expr> eqs, rhs;
    for (const auto& e : c.equations) eqs.push_back(parse_expression(e.text, c.n, c.K, c.m, e.line, e.column));
    for (const auto& e : c.rhs) rhs.push_back(parse_expression(e.text, c.n, 0, 0, e.line, e.column));
    Box box = Box::make(c.lower, c.upper);
    return Problem{PdeSystem(c.n, c.K, c.m, std::move(eqs)), Rhs(c.n, std::move(rhs)), build_partition(box, c.cells),
                   Lattice::uniform(box, c.lattice)};
}

} // namespace ocm
