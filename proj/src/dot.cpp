#include "causal/dot.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace causal {

namespace {

struct Lexer {
    const std::string& text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("dot parse error at " + std::to_string(line) + ":" +
                                 std::to_string(col) + ": " + msg);
    }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }

    // Bare identifier (letters, digits, '_', '.') or a double-quoted string.
    std::string identifier() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input, expected identifier");
        if (text[pos] == '"') {
            advance();
            std::string out;
            while (pos < text.size() && text[pos] != '"') {
                if (text[pos] == '\\' && pos + 1 < text.size()) advance();
                out.push_back(text[pos]);
                advance();
            }
            if (pos >= text.size()) fail("unterminated quoted identifier");
            advance();
            return out;
        }
        std::string out;
        while (pos < text.size()) {
            const char c = text[pos];
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') break;
            out.push_back(c);
            advance();
        }
        if (out.empty()) fail("expected identifier");
        return out;
    }
};

// One [key="value"] attribute list; only `label` is supported.
std::string parse_label_attr(Lexer& lex) {
    lex.expect('[');
    const std::string key = lex.identifier();
    if (key != "label") lex.fail("unsupported attribute '" + key + "' (only label is supported)");
    lex.expect('=');
    const std::string value = lex.identifier();
    lex.expect(']');
    return value;
}

bool parse_number(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

}  // namespace

Dag parse_dot(const std::string& text) {
    Lexer lex(text);
    const std::string kw = lex.identifier();
    if (kw != "digraph") lex.fail("expected 'digraph', got '" + kw + "'");
    if (lex.peek() != '{') lex.identifier();  // optional graph name
    lex.expect('{');

    Dag g;
    std::set<std::string> declared;

    while (!lex.eof() && lex.peek() != '}') {
        const std::string first = lex.identifier();
        std::vector<std::string> chain{first};
        while (lex.peek() == '-') {
            lex.expect('-');
            lex.expect('>');
            chain.push_back(lex.identifier());
        }

        std::string label;
        bool has_label = false;
        if (lex.peek() == '[') {
            label = parse_label_attr(lex);
            has_label = true;
        }

        if (chain.size() == 1) {
            // Node statement. Re-declaring with a conflicting label is an
            // error; the label check lives in Dag::set_label.
            if (declared.count(first) && has_label && !g.label(first).empty() &&
                g.label(first) != label) {
                lex.fail("node " + first + " re-declared with a different label");
            }
            g.add_node(first, has_label ? label : "");
            declared.insert(first);
        } else {
            std::optional<double> weight;
            if (has_label) {
                double w = 0.0;
                if (!parse_number(label, w)) {
                    lex.fail("edge label must be numeric (weight), got \"" + label + "\"");
                }
                weight = w;
            }
            for (size_t i = 0; i + 1 < chain.size(); ++i) {
                try {
                    g.add_edge(chain[i], chain[i + 1], weight);
                } catch (const std::invalid_argument& e) {
                    lex.fail(e.what());
                }
            }
        }
        // Statement separator is optional before '}'.
        lex.consume(';');
    }
    lex.expect('}');
    if (!lex.eof()) lex.fail("trailing content after closing '}'");
    return g;
}

namespace {

bool needs_quoting(const std::string& s) {
    if (s.empty()) return true;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return true;
    }
    return std::isdigit(static_cast<unsigned char>(s[0])) != 0;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string quote(const std::string& s) { return needs_quoting(s) ? quoted(s) : s; }

}  // namespace

std::string serialize_dot(const Dag& g) {
    std::string out = "digraph {\n";
    for (const auto& n : g.nodes()) {
        out += "  " + quote(n);
        if (!g.label(n).empty()) out += " [label=" + quoted(g.label(n)) + "]";
        out += ";\n";
    }
    char buf[40];
    for (const auto& f : g.nodes()) {
        for (const auto& t : g.children_of(f)) {
            out += "  " + quote(f) + " -> " + quote(t);
            if (auto w = g.edge_weight(f, t)) {
                std::snprintf(buf, sizeof buf, "%.17g", *w);
                out += std::string(" [label=") + quoted(buf) + "]";
            }
            out += ";\n";
        }
    }
    out += "}\n";
    return out;
}

}  // namespace causal
