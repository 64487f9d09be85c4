#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qk/field.hpp"
#include "qk/presentation.hpp"
#include "qk/quiver.hpp"
#include "qk/subspace.hpp"

/*
 * Text format for bound-quiver presentations.
 *
 *   [quiver]
 *   vertices: x y z
 *   a: x -> y
 *   b: y -> z
 *
 *   [relations]
 *   r1 = b*a
 *   r2 = c*a - d*b
 *   r3 = 2*v*u - u*v        # coefficients are field elements
 *
 *   [grading]               # optional; must raise levels by 1 along arrows
 *   x = 0
 *   y = 1
 *   z = 2
 *
 *   [field]                 # optional; default GF(32003)
 *   p = 32003               # or: rational
 *
 * `#` starts a comment.  Paths compose right to left: `b*a` is the path
 * that traverses `a` first and `b` second, so every relation is a linear
 * combination of composable length-2 words.  Vertex names may be any
 * word; arrow names must contain at least one non-digit so they cannot
 * be confused with coefficients inside relation expressions.
 */
namespace qk::io {

/* Raw, field-independent parse result.  Coefficients stay as integer
 * pairs num/den until a concrete field is chosen. */
struct PresentationFile {
    struct Term {
        long long num = 1, den = 1;
        std::vector<std::string> arrows; // traversal order (rightmost factor first)
        int line = 0;
    };
    struct Relation {
        std::string name;
        std::vector<Term> terms;
        int line = 0;
    };

    Quiver quiver;
    std::vector<Relation> relations;
    std::optional<std::map<std::string, long long>> grading; // by vertex name
    FieldSpec field;
};

namespace detail {

inline std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline bool all_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct Token {
    enum Kind { word, number, plus, minus, star, slash, equals, colon, arrow_to } kind;
    std::string text;
};

inline std::vector<Token> lex_line(const std::string& line, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') { ++i; continue; }
        if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            out.push_back({Token::arrow_to, "->"});
            i += 2;
            continue;
        }
        switch (c) {
            case '+': out.push_back({Token::plus, "+"}); ++i; continue;
            case '-': out.push_back({Token::minus, "-"}); ++i; continue;
            case '*': out.push_back({Token::star, "*"}); ++i; continue;
            case '/': out.push_back({Token::slash, "/"}); ++i; continue;
            case '=': out.push_back({Token::equals, "="}); ++i; continue;
            case ':': out.push_back({Token::colon, ":"}); ++i; continue;
            default: break;
        }
        if (is_word_char(c)) {
            size_t b = i;
            while (i < line.size() && is_word_char(line[i])) ++i;
            std::string w = line.substr(b, i - b);
            out.push_back({all_digits(w) ? Token::number : Token::word, std::move(w)});
            continue;
        }
        throw ParseError(fmt::format("line {}: unexpected character '{}'", lineno, c));
    }
    return out;
}

inline long long to_ll(const std::string& s, int lineno) {
    try {
        return std::stoll(s);
    } catch (const std::exception&) {
        throw ParseError(fmt::format("line {}: integer '{}' out of range", lineno, s));
    }
}

/* expr := ['-'] term (('+'|'-') term)*
 * term := (coef '*')? word ('*' word)*
 * coef := number ('/' number)?
 * Factors arrive left to right but paths compose right to left, so the
 * stored arrow list is reversed into traversal order. */
inline std::vector<PresentationFile::Term> parse_expression(const std::vector<Token>& toks,
                                                            size_t i, int lineno) {
    std::vector<PresentationFile::Term> terms;
    bool neg = false;
    if (i < toks.size() && (toks[i].kind == Token::minus || toks[i].kind == Token::plus)) {
        neg = toks[i].kind == Token::minus;
        ++i;
    }
    while (true) {
        if (i >= toks.size())
            throw ParseError(fmt::format("line {}: expected a term", lineno));
        PresentationFile::Term t;
        t.line = lineno;
        if (toks[i].kind == Token::number) {
            t.num = to_ll(toks[i].text, lineno);
            ++i;
            if (i < toks.size() && toks[i].kind == Token::slash) {
                ++i;
                if (i >= toks.size() || toks[i].kind != Token::number)
                    throw ParseError(fmt::format("line {}: expected denominator", lineno));
                t.den = to_ll(toks[i].text, lineno);
                if (t.den == 0)
                    throw ParseError(fmt::format("line {}: zero denominator", lineno));
                ++i;
            }
            if (i >= toks.size() || toks[i].kind != Token::star)
                throw ParseError(
                    fmt::format("line {}: expected '*' after coefficient", lineno));
            ++i;
        }
        if (neg) t.num = -t.num;
        std::vector<std::string> factors;
        while (true) {
            if (i >= toks.size() || toks[i].kind != Token::word)
                throw ParseError(fmt::format("line {}: expected an arrow name", lineno));
            factors.push_back(toks[i].text);
            ++i;
            if (i < toks.size() && toks[i].kind == Token::star) { ++i; continue; }
            break;
        }
        t.arrows.assign(factors.rbegin(), factors.rend());
        terms.push_back(std::move(t));
        if (i >= toks.size()) break;
        if (toks[i].kind == Token::plus) neg = false;
        else if (toks[i].kind == Token::minus) neg = true;
        else
            throw ParseError(
                fmt::format("line {}: expected '+' or '-', got '{}'", lineno, toks[i].text));
        ++i;
    }
    return terms;
}

} // namespace detail

inline PresentationFile parse_presentation(std::istream& in) {
    using detail::Token;
    PresentationFile pf;
    std::map<std::string, long long> grading;
    bool saw_grading = false;

    enum class Section { none, quiver, relations, grading, field };
    Section sec = Section::none;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::string line = detail::strip(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(fmt::format("line {}: unterminated section header", lineno));
            std::string name = line.substr(1, line.size() - 2);
            if (name == "quiver") sec = Section::quiver;
            else if (name == "relations") sec = Section::relations;
            else if (name == "grading") { sec = Section::grading; saw_grading = true; }
            else if (name == "field") sec = Section::field;
            else
                throw ParseError(fmt::format("line {}: unknown section '[{}]'", lineno, name));
            continue;
        }

        auto toks = detail::lex_line(line, lineno);
        switch (sec) {
            case Section::none:
                throw ParseError(
                    fmt::format("line {}: content before the first section header", lineno));
            case Section::quiver: {
                if (toks.size() >= 2 && toks[0].text == "vertices" &&
                    toks[1].kind == Token::colon) {
                    for (size_t i = 2; i < toks.size(); ++i) {
                        if (toks[i].kind != Token::word && toks[i].kind != Token::number)
                            throw ParseError(
                                fmt::format("line {}: bad vertex name '{}'", lineno,
                                            toks[i].text));
                        try {
                            pf.quiver.add_vertex(toks[i].text);
                        } catch (const ParseError& e) {
                            throw ParseError(fmt::format("line {}: {}", lineno, e.what()));
                        }
                    }
                    break;
                }
                if (toks.size() != 5 || toks[1].kind != Token::colon ||
                    toks[3].kind != Token::arrow_to ||
                    (toks[2].kind != Token::word && toks[2].kind != Token::number) ||
                    (toks[4].kind != Token::word && toks[4].kind != Token::number))
                    throw ParseError(fmt::format(
                        "line {}: expected 'vertices: ...' or 'name: src -> tgt'", lineno));
                if (toks[0].kind != Token::word)
                    throw ParseError(fmt::format(
                        "line {}: arrow name '{}' must contain a non-digit", lineno,
                        toks[0].text));
                try {
                    pf.quiver.add_arrow(toks[0].text, toks[2].text, toks[4].text);
                } catch (const ParseError& e) {
                    throw ParseError(fmt::format("line {}: {}", lineno, e.what()));
                }
                break;
            }
            case Section::relations: {
                if (toks.size() < 3 || toks[0].kind != Token::word ||
                    toks[1].kind != Token::equals)
                    throw ParseError(
                        fmt::format("line {}: expected 'name = expression'", lineno));
                PresentationFile::Relation rel;
                rel.name = toks[0].text;
                rel.line = lineno;
                rel.terms = detail::parse_expression(toks, 2, lineno);
                pf.relations.push_back(std::move(rel));
                break;
            }
            case Section::grading: {
                // levels may be negative: '-' and the digits lex separately
                bool ok = toks.size() >= 3 && toks[1].kind == Token::equals &&
                          (toks[0].kind == Token::word || toks[0].kind == Token::number);
                long long sign = 1;
                size_t vi = 2;
                if (ok && toks[vi].kind == Token::minus) { sign = -1; ++vi; }
                ok = ok && vi + 1 == toks.size() && toks[vi].kind == Token::number;
                if (!ok)
                    throw ParseError(fmt::format("line {}: expected 'vertex = level'", lineno));
                grading[toks[0].text] = sign * detail::to_ll(toks[vi].text, lineno);
                break;
            }
            case Section::field: {
                if (toks.size() == 1 && toks[0].text == "rational") {
                    pf.field.rational = true;
                    break;
                }
                if (toks.size() == 3 && toks[0].text == "p" && toks[1].kind == Token::equals &&
                    toks[2].kind == Token::number) {
                    pf.field.rational = false;
                    pf.field.p = detail::to_ll(toks[2].text, lineno);
                    if (pf.field.p < 2)
                        throw ParseError(
                            fmt::format("line {}: field characteristic must be >= 2", lineno));
                    break;
                }
                throw ParseError(
                    fmt::format("line {}: expected 'p = <prime>' or 'rational'", lineno));
            }
        }
    }
    if (saw_grading) pf.grading = std::move(grading);
    if (pf.quiver.num_vertices() == 0)
        throw ParseError("the [quiver] section declared no vertices");
    return pf;
}

inline PresentationFile parse_presentation(const std::string& text) {
    std::istringstream in(text);
    return parse_presentation(in);
}

template <class F>
struct BuiltPresentation {
    typename Presentation<F>::Ptr pres;
    std::optional<Grading> declared_grading; // from the file, validated
};

/* Instantiate the parse over a concrete field: resolve arrow names, check
 * composability and degree, assemble R_2(x,y) subspaces, validate a
 * declared grading against the arrow rule. */
template <class F>
BuiltPresentation<F> build_presentation(const PresentationFile& pf, F f,
                                        long long path_cap = 100000) {
    const Quiver& q = pf.quiver;
    using E = typename F::elem;

    std::map<std::pair<int, int>, std::vector<std::vector<E>>> rows;
    for (const auto& rel : pf.relations) {
        int src = -1, tgt = -1;
        std::vector<std::pair<E, Path>> parts;
        for (const auto& t : rel.terms) {
            if (t.arrows.size() != 2)
                throw ParseError(fmt::format(
                    "line {}: relation '{}' has a term of degree {}; relations must be "
                    "quadratic",
                    t.line, rel.name, t.arrows.size()));
            int a0, a1;
            try {
                a0 = q.arrow_index(t.arrows[0]);
                a1 = q.arrow_index(t.arrows[1]);
            } catch (const ParseError& e) {
                throw ParseError(fmt::format("line {}: {}", t.line, e.what()));
            }
            if (q.arrow(a0).tgt != q.arrow(a1).src)
                throw ParseError(fmt::format(
                    "line {}: '{}*{}' is not composable ({} ends at {}, {} starts at {})",
                    t.line, t.arrows[1], t.arrows[0], t.arrows[0],
                    q.vertex_name(q.arrow(a0).tgt), t.arrows[1],
                    q.vertex_name(q.arrow(a1).src)));
            Path pth{q.arrow(a0).src, q.arrow(a1).tgt, {a0, a1}};
            if (src == -1) { src = pth.src; tgt = pth.tgt; }
            else if (src != pth.src || tgt != pth.tgt)
                throw ParseError(fmt::format(
                    "line {}: relation '{}' mixes paths {} -> {} and {} -> {}", t.line,
                    rel.name, q.vertex_name(src), q.vertex_name(tgt),
                    q.vertex_name(pth.src), q.vertex_name(pth.tgt)));
            E coef = f.from_int(t.num);
            if (t.den != 1) coef = f.div(coef, f.from_int(t.den));
            parts.emplace_back(std::move(coef), std::move(pth));
        }
        auto basis = paths(q, src, tgt, 2, path_cap);
        std::vector<E> row(basis.size(), f.zero());
        for (auto& [coef, pth] : parts) {
            auto it = std::lower_bound(basis.begin(), basis.end(), pth);
            row[static_cast<size_t>(it - basis.begin())] =
                f.add(row[it - basis.begin()], coef);
        }
        rows[{src, tgt}].push_back(std::move(row));
    }

    std::map<std::pair<int, int>, Subspace<F>> r2;
    for (auto& [key, rs] : rows) {
        Matrix<F> m(f, static_cast<int>(rs.size()), static_cast<int>(rs[0].size()));
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m(i, j) = rs[i][j];
        r2[key] = Subspace<F>::from_rows(m);
    }

    BuiltPresentation<F> out;
    out.pres = Presentation<F>::create(q, f, std::move(r2), path_cap);
    if (pf.grading) {
        Grading g{std::vector<long long>(q.num_vertices(), 0)};
        for (int x = 0; x < q.num_vertices(); ++x) {
            auto it = pf.grading->find(q.vertex_name(x));
            if (it == pf.grading->end())
                throw ParseError(fmt::format("[grading] misses vertex '{}'", q.vertex_name(x)));
            g.level[x] = it->second;
        }
        for (const auto& [name, lv] : *pf.grading) {
            (void)lv;
            if (!q.has_vertex(name))
                throw ParseError(fmt::format("[grading] names unknown vertex '{}'", name));
        }
        for (int a = 0; a < q.num_arrows(); ++a) {
            const auto& ar = q.arrow(a);
            if (g.level[ar.tgt] != g.level[ar.src] + 1)
                throw ParseError(fmt::format(
                    "declared grading violates the arrow rule on '{}': level({}) = {} but "
                    "level({}) = {}",
                    ar.name, q.vertex_name(ar.src), g.level[ar.src], q.vertex_name(ar.tgt),
                    g.level[ar.tgt]));
        }
        out.declared_grading = std::move(g);
    }
    return out;
}

namespace detail {

/* GF coefficients print balanced (-p/2 .. p/2) so files stay readable and
 * the parse maps them back to the same residues. */
inline std::string coef_str(const GF& f, GF::elem c) {
    long long v = c > f.p / 2 ? c - f.p : c;
    return std::to_string(v);
}
inline std::string coef_str(const QQ& f, const QQ::elem& c) { return f.str(c); }

} // namespace detail

inline std::string field_section(const GF& f) { return fmt::format("p = {}", f.p); }
inline std::string field_section(const QQ&) { return "rational"; }

/* Canonical text form: vertices and arrows in index order, one relation
 * line per canonical basis row of each R_2(x,y) in (x,y) order.  Parsing
 * the output reproduces the presentation bit for bit. */
template <class F>
std::string write_presentation(const Presentation<F>& p,
                               const std::optional<Grading>& grading = {}) {
    const Quiver& q = p.quiver();
    const F& f = p.field();
    std::string out = "[quiver]\nvertices:";
    for (int x = 0; x < q.num_vertices(); ++x) out += " " + q.vertex_name(x);
    out += "\n";
    for (int a = 0; a < q.num_arrows(); ++a) {
        const auto& ar = q.arrow(a);
        out += fmt::format("{}: {} -> {}\n", ar.name, q.vertex_name(ar.src),
                           q.vertex_name(ar.tgt));
    }

    out += "\n[relations]\n";
    int rel_no = 0;
    for (int x = 0; x < q.num_vertices(); ++x)
        for (int y = 0; y < q.num_vertices(); ++y) {
            auto sub = p.r2(x, y);
            if (sub.dim() == 0) continue;
            const auto& basis = p.paths_between(x, y, 2);
            for (int i = 0; i < sub.dim(); ++i) {
                std::string expr;
                for (int j = 0; j < sub.ambient_dim(); ++j) {
                    auto c = sub.basis()(i, j);
                    if (f.is_zero(c)) continue;
                    std::string cs = detail::coef_str(f, c);
                    bool neg = !cs.empty() && cs.front() == '-';
                    std::string mag = neg ? cs.substr(1) : cs;
                    std::string term =
                        mag == "1" ? path_str(q, basis[j])
                                   : fmt::format("{}*{}", mag, path_str(q, basis[j]));
                    if (expr.empty()) expr = neg ? "-" + term : term;
                    else expr += (neg ? " - " : " + ") + term;
                }
                out += fmt::format("r{} = {}\n", ++rel_no, expr);
            }
        }

    if (grading) {
        out += "\n[grading]\n";
        for (int x = 0; x < q.num_vertices(); ++x)
            out += fmt::format("{} = {}\n", q.vertex_name(x), grading->level[x]);
    }
    out += fmt::format("\n[field]\n{}\n", field_section(f));
    return out;
}

} // namespace qk::io
