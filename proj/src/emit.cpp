#include "sauv/errors.hpp"
#include "sauv/symexpr.hpp"

#include <json.hpp>

#include <cctype>

namespace sauv {

namespace {

std::string word_text(const Word& w);

std::string factor_text(const Factor& f)
{
    if (f.is_symbol) return std::string(f.alg == Alg::A ? "a" : "b") + std::to_string(f.index);
    std::string s = map_name(f.kind);
    if (f.kind == MapKind::Phi) s += "[" + f.time.to_string() + "]";
    return s + "(" + word_text(f.argument()) + ")";
}

std::string word_text(const Word& w)
{
    if (w.empty()) return "one";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += "*";
        s += factor_text(w[i]);
    }
    return s;
}

std::string word_latex(const Word& w);

std::string index_latex(int k)
{
    std::string s = std::to_string(k);
    return s.size() == 1 ? s : "{" + s + "}";
}

std::string factor_latex(const Factor& f)
{
    if (f.is_symbol) return std::string(f.alg == Alg::A ? "a_" : "b_") + index_latex(f.index);
    std::string s;
    switch (f.kind) {
    case MapKind::Rho: s = "\\rho"; break;
    case MapKind::Psi: s = "\\psi"; break;
    case MapKind::Omega: s = "\\omega"; break;
    case MapKind::Nu: s = "\\nu"; break;
    case MapKind::Phi: s = "\\phi_{" + f.time.to_latex() + "}"; break;
    }
    return s + "(" + word_latex(f.argument()) + ")";
}

std::string word_latex(const Word& w)
{
    if (w.empty()) return "\\mathbf{1}";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += factor_latex(w[i]);
    }
    return s;
}

template <class FactorFn, class CoefFn>
std::string render(const Expr& e, FactorFn factor, CoefFn coef, const char* mul, const char* unit)
{
    if (e.terms().empty()) return e.target() == Alg::Scalar ? "0" : std::string("0") + mul + unit;
    std::string out;
    bool first = true;
    for (const auto& t : e.terms()) {
        bool neg = t.coef < 0;
        Rational c = neg ? -t.coef : t.coef;
        std::string body;
        for (const auto& s : t.scalars) body += (body.empty() ? "" : mul) + factor(s);
        for (const auto& f : t.word) body += (body.empty() ? "" : mul) + factor(f);
        bool needs_unit = t.word.empty() && e.target() != Alg::Scalar;
        std::string piece;
        if (body.empty())
            piece = needs_unit ? (c == 1 ? std::string(unit) : coef(c) + mul + unit) : coef(c);
        else {
            if (needs_unit) body += std::string(mul) + unit;
            piece = c == 1 ? body : coef(c) + mul + body;
        }
        if (first)
            out += neg ? "-" + piece : piece;
        else
            out += (neg ? " - " : " + ") + piece;
        first = false;
    }
    return out;
}

nlohmann::json word_json(const Word& w);

nlohmann::json factor_json(const Factor& f)
{
    if (f.is_symbol) return std::string(f.alg == Alg::A ? "a" : "b") + std::to_string(f.index);
    nlohmann::json j;
    j["map"] = map_name(f.kind);
    if (f.kind == MapKind::Phi) j["time"] = f.time.to_string();
    j["arg"] = word_json(f.argument());
    return j;
}

nlohmann::json word_json(const Word& w)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : w) arr.push_back(factor_json(f));
    return arr;
}

MapKind map_from_name(const std::string& s)
{
    static const std::pair<const char*, MapKind> maps[] = {{"rho", MapKind::Rho},
                                                           {"psi", MapKind::Psi},
                                                           {"omega", MapKind::Omega},
                                                           {"nu", MapKind::Nu},
                                                           {"phi", MapKind::Phi}};
    for (const auto& [n, k] : maps)
        if (s == n) return k;
    throw std::invalid_argument("unknown map '" + s + "'");
}

Alg alg_from_name(const std::string& s)
{
    if (s == "A") return Alg::A;
    if (s == "B") return Alg::B;
    if (s == "scalar") return Alg::Scalar;
    throw std::invalid_argument("unknown target '" + s + "'");
}

Expr word_from_json(const nlohmann::json& j, Alg target, const RewriteOptions& opt);

Expr factor_from_json(const nlohmann::json& j, const RewriteOptions& opt)
{
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s.size() < 2 || (s[0] != 'a' && s[0] != 'b'))
            throw std::invalid_argument("bad symbol '" + s + "'");
        for (std::size_t k = 1; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw std::invalid_argument("bad symbol '" + s + "'");
        return Expr::symbol(s[0] == 'a' ? Alg::A : Alg::B, std::stoi(s.substr(1)));
    }
    MapKind kind = map_from_name(j.at("map").get<std::string>());
    TimeExpr time;
    if (kind == MapKind::Phi) time = TimeExpr::parse(j.at("time").get<std::string>());
    Expr arg;
    const auto& a = j.at("arg");
    if (a.is_array())
        arg = word_from_json(a, map_source(kind), opt);
    else
        arg = parse_json(a.dump(), opt);
    return apply_map(kind, arg, time, opt);
}

Expr word_from_json(const nlohmann::json& j, Alg target, const RewriteOptions& opt)
{
    Expr acc = Expr::unit(target);
    for (const auto& f : j) acc = acc * factor_from_json(f, opt);
    return acc;
}

}  // namespace

std::string emit_text(const Expr& e)
{
    return render(e, factor_text, [](const Rational& r) { return to_string(r); }, "*", "one");
}

std::string emit_latex(const Expr& e)
{
    return render(e, factor_latex, [](const Rational& r) { return to_latex(r); }, " ", "\\mathbf{1}");
}

std::string emit_json(const Expr& e)
{
    nlohmann::json j;
    j["target"] = alg_name(e.target());
    j["terms"] = nlohmann::json::array();
    for (const auto& t : e.terms()) {
        nlohmann::json tj;
        tj["coef"] = to_string(t.coef);
        tj["scalars"] = word_json(t.scalars);
        tj["word"] = word_json(t.word);
        j["terms"].push_back(tj);
    }
    return j.dump();
}

std::string emit(const Expr& e, Format f)
{
    switch (f) {
    case Format::Text: return emit_text(e);
    case Format::Latex: return emit_latex(e);
    case Format::Json: return emit_json(e);
    }
    return {};
}

Expr parse_json(const std::string& s, const RewriteOptions& opt)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(s);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    }
    Alg target = j.contains("target") ? alg_from_name(j["target"].get<std::string>()) : Alg::Scalar;
    Expr acc = Expr::zero(target);
    for (const auto& tj : j.at("terms")) {
        Expr term = Expr::scalar(parse_rational(tj.at("coef").get<std::string>()));
        for (const auto& sj : tj.at("scalars")) term = term * factor_from_json(sj, opt);
        term = term * word_from_json(tj.at("word"), target, opt);
        acc = acc + term;
    }
    if (!j.contains("target") || acc.target() == target) return acc;
    return acc.retarget(target);
}

}  // namespace sauv
