#include "asjet/coverfile.hpp"

#include <fstream>
#include <sstream>

namespace asjet {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line;
    size_t hash = body.find('#');
    if (hash != std::string::npos) body.resize(hash);
    std::istringstream is(body);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

long parse_long(const std::string& tok, const std::string& where,
                const std::string& what) {
    try {
        size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": bad " + what + " '" + tok + "'");
    }
}

}  // namespace

CoverFile parse_cover_text(const std::string& text, const std::string& source_name) {
    CoverFile file;
    bool saw_p = false, saw_e = false, saw_modulus = false, saw_d = false,
         saw_prec = false, saw_norm = false, saw_exact = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto loc = [&] { return source_name + ":" + std::to_string(lineno); };
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(loc() + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "p") {
            if (saw_p) throw fail("duplicate 'p'");
            if (toks.size() != 2) throw fail("'p' needs one integer");
            long v = parse_long(toks[1], loc(), "characteristic");
            if (v < 2) throw fail("characteristic must be at least 2");
            file.p = uint64_t(v);
            saw_p = true;
        } else if (key == "e") {
            if (saw_e) throw fail("duplicate 'e'");
            if (toks.size() != 2) throw fail("'e' needs one integer");
            long v = parse_long(toks[1], loc(), "extension degree");
            if (v < 1) throw fail("extension degree must be >= 1");
            file.e = int(v);
            saw_e = true;
        } else if (key == "modulus") {
            if (saw_modulus) throw fail("duplicate 'modulus'");
            if (toks.size() < 2) throw fail("'modulus' needs coefficients");
            for (size_t i = 1; i < toks.size(); ++i) {
                long v = parse_long(toks[i], loc(), "modulus coefficient");
                if (v < 0) throw fail("modulus coefficients are F_p digits");
                file.modulus.push_back(uint32_t(v));
            }
            saw_modulus = true;
        } else if (key == "d") {
            if (saw_d) throw fail("duplicate 'd'");
            if (toks.size() != 2) throw fail("'d' needs 1 or 2");
            long v = parse_long(toks[1], loc(), "branch count");
            if (v != 1 && v != 2) throw fail("'d' must be 1 or 2");
            file.d = int(v);
            saw_d = true;
        } else if (key == "term") {
            if (toks.size() != 4) throw fail("'term' needs: term <i> <j> <coeff>");
            CoverFile::Term t;
            t.i = int(parse_long(toks[1], loc(), "T-exponent"));
            t.j = int(parse_long(toks[2], loc(), "U-exponent"));
            t.coeff = toks[3];
            t.line = lineno;
            file.terms.push_back(std::move(t));
        } else if (key == "prec") {
            if (saw_prec) throw fail("duplicate 'prec'");
            if (toks.size() != 3) throw fail("'prec' needs two integers");
            file.prec_t = parse_long(toks[1], loc(), "T-precision");
            file.prec_u = parse_long(toks[2], loc(), "U-precision");
            if (file.prec_t < 1 || file.prec_u < 1)
                throw fail("precision bounds must be >= 1");
            saw_prec = true;
        } else if (key == "exact") {
            if (saw_exact) throw fail("duplicate 'exact'");
            if (toks.size() != 2) throw fail("'exact' needs 0 or 1");
            long v = parse_long(toks[1], loc(), "exact flag");
            if (v != 0 && v != 1) throw fail("'exact' must be 0 or 1");
            file.exact_flag = v == 1;
            saw_exact = true;
        } else if (key == "normalized") {
            if (saw_norm) throw fail("duplicate 'normalized'");
            if (toks.size() != 2) throw fail("'normalized' needs 0 or 1");
            long v = parse_long(toks[1], loc(), "normalized flag");
            if (v != 0 && v != 1) throw fail("'normalized' must be 0 or 1");
            file.normalized_flag = v == 1;
            saw_norm = true;
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    lineno = 0;
    if (!saw_p) throw ParseError(source_name + ": missing 'p' line");
    if (!saw_e) throw ParseError(source_name + ": missing 'e' line");
    if (!saw_modulus) throw ParseError(source_name + ": missing 'modulus' line");
    if (!saw_d) throw ParseError(source_name + ": missing 'd' line");
    if (file.terms.empty()) throw ParseError(source_name + ": needs at least one 'term'");
    if (!saw_prec) throw ParseError(source_name + ": missing 'prec' line");
    if (int(file.modulus.size()) != file.e + 1)
        throw ParseError(source_name + ": modulus needs e+1 coefficients");
    return file;
}

CoverFile parse_cover_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open cover file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cover_text(buf.str(), path);
}

std::string serialize_cover(const CoverFile& file) {
    std::ostringstream os;
    os << "p " << file.p << '\n';
    os << "e " << file.e << '\n';
    os << "modulus";
    for (uint32_t c : file.modulus) os << ' ' << c;
    os << '\n';
    os << "d " << file.d << '\n';
    auto terms = file.terms;
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (const auto& t : terms)
        os << "term " << t.i << ' ' << t.j << ' ' << t.coeff << '\n';
    os << "prec " << file.prec_t << ' ' << file.prec_u << '\n';
    if (file.exact_flag) os << "exact 1\n";
    if (file.normalized_flag) os << "normalized 1\n";
    return os.str();
}

LoadedCover load_cover(const CoverFile& file) {
    std::shared_ptr<const Field> field;
    try {
        field = std::make_shared<const Field>(file.p, file.e, file.modulus);
    } catch (const DomainError& err) {
        throw ParseError(std::string("modulus line: ") + err.what());
    }
    std::vector<BivTerm> terms;
    int min_i = 0, min_j = 0;
    for (const auto& t : file.terms) {
        if (file.d == 1 && t.j < 0)
            throw ParseError("line " + std::to_string(t.line) +
                             ": U-exponents must be >= 0 when d = 1");
        BivTerm bt;
        bt.ti = t.i;
        bt.ui = t.j;
        try {
            bt.c = field->parse(t.coeff);
        } catch (const ParseError& err) {
            throw ParseError("line " + std::to_string(t.line) + ": " + err.what());
        }
        min_i = std::min(min_i, t.i);
        min_j = std::min(min_j, t.j);
        terms.push_back(bt);
    }
    const int m0 = -min_i, n0 = -min_j;
    const int know_t = int(file.prec_t) - m0;
    const int know_u = int(file.prec_u) - n0;
    for (const auto& t : file.terms)
        if (t.i >= know_t || t.j >= know_u)
            throw ParseError("line " + std::to_string(t.line) +
                             ": term lies beyond the declared precision");
    BivariateLaurent a =
        file.exact_flag
            ? BivariateLaurent::exact(field.get(), std::move(terms))
            : BivariateLaurent(field.get(), std::move(terms), know_t, know_u, -m0, -n0);
    CoverSpec cover = cover_normalize(field, a, file.d);
    if (file.normalized_flag) {
        // flag promises the datum was already minimal and cleared
        if (cover.a().terms().size() != a.terms().size())
            throw DomainError("cover marked normalized but normalization changed it");
        for (size_t k = 0; k < a.terms().size(); ++k) {
            const auto& x = a.terms()[k];
            const auto& y = cover.a().terms()[k];
            if (x.ti != y.ti || x.ui != y.ui || x.c != y.c)
                throw DomainError("cover marked normalized but normalization changed it");
        }
    }
    return LoadedCover{field, std::move(cover)};
}

LoadedCover load_cover_path(const std::string& path) {
    return load_cover(parse_cover_path(path));
}

CurveJet parse_jet(const Field* f, const std::string& text) {
    auto parse_elements = [&](const std::string& body) {
        std::vector<std::string> coords;
        std::string cur;
        for (char ch : body) {
            if (ch == ',') {
                coords.push_back(cur);
                cur.clear();
            } else if (ch != ' ') {
                cur += ch;
            }
        }
        coords.push_back(cur);
        if (coords.size() % size_t(f->e()) != 0)
            throw ParseError("jet: coordinate count is not a multiple of e");
        std::vector<FieldElement> out;
        for (size_t i = 0; i < coords.size(); i += size_t(f->e())) {
            std::string joined;
            for (int k = 0; k < f->e(); ++k) {
                if (k) joined += ',';
                joined += coords[i + size_t(k)];
            }
            out.push_back(f->parse(joined));
        }
        return out;
    };
    if (text.rfind("x:", 0) == 0)
        return CurveJet::transversal(f, parse_elements(text.substr(2)));
    if (text.rfind("t:", 0) == 0) {
        size_t second = text.find(':', 2);
        if (second == std::string::npos)
            throw ParseError("jet: expected t:<r>:<coefficients>");
        long r = parse_long(text.substr(2, second - 2), "jet", "order r");
        if (r < 1) throw ParseError("jet: r must be >= 1");
        return CurveJet::tangent(f, int(r), parse_elements(text.substr(second + 1)));
    }
    throw ParseError("jet: expected 'x:...' or 't:<r>:...'");
}

BivariateLaurent parse_curve_text(const Field* f, const std::string& text,
                                  const std::string& source_name) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::vector<BivTerm> terms;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] != "term" || toks.size() != 4)
            throw ParseError(source_name + ":" + std::to_string(lineno) +
                             ": curve files contain only 'term <i> <j> <c>' lines");
        std::string where = source_name + ":" + std::to_string(lineno);
        int i = int(parse_long(toks[1], where, "T-exponent"));
        int j = int(parse_long(toks[2], where, "U-exponent"));
        if (i < 0 || j < 0)
            throw ParseError(source_name + ":" + std::to_string(lineno) +
                             ": curve germs have no poles");
        terms.push_back({i, j, f->parse(toks[3])});
    }
    if (terms.empty()) throw ParseError(source_name + ": empty curve");
    return BivariateLaurent::exact(f, std::move(terms));
}

namespace {

// Fixed-point solve of f(t, u) = 0 for one variable in terms of the other,
// to absolute precision prec.  solve_u: u = phi(t); otherwise t = psi(u).
LaurentSeries solve_branch(const Field* f, const BivariateLaurent& curve, bool solve_u,
                           int prec) {
    FieldElement lin = solve_u ? curve.coeff(0, 1) : curve.coeff(1, 0);
    if (lin.is_zero()) throw InternalError("solve_branch needs a unit linear term");
    // rewrite f = lin*V - R(T,U) and iterate V <- lin^{-1} R
    BivariateLaurent r_part = BivariateLaurent::exact(
        f, {{solve_u ? 0 : 1, solve_u ? 1 : 0, lin}});
    r_part = r_part.add(curve.negate());
    FieldElement lin_inv = lin.inverse();
    LaurentSeries sol = LaurentSeries::zero(f, prec);
    for (int it = 0; it < prec + 1; ++it) {
        LaurentSeries next =
            solve_u ? r_part.substitute_u(sol) : r_part.substitute_t(sol);
        sol = next.scale(lin_inv).truncate(prec);
    }
    // residual check
    LaurentSeries resid = solve_u ? curve.substitute_u(sol) : curve.substitute_t(sol);
    if (!resid.is_zero()) throw InternalError("curve solve did not converge");
    return sol;
}

}  // namespace

CurveJet normalize_curve(const Field* f, const BivariateLaurent& curve, int d,
                         int jet_length) {
    if (!curve.is_exact()) throw DomainError("curve germs must be exact");
    if (jet_length < 1) throw DomainError("jet length must be >= 1");
    for (const auto& t : curve.terms())
        if (t.ti < 0 || t.ui < 0) throw DomainError("curve germs have no poles");
    if (!curve.coeff(0, 0).is_zero())
        throw DomainError("curve does not pass through the origin");
    FieldElement c_t = curve.coeff(1, 0);
    FieldElement c_u = curve.coeff(0, 1);
    if (c_t.is_zero() && c_u.is_zero())
        throw DomainError("singular curve germ (no linear part)");

    if (d == 1 && !c_u.is_zero()) {
        LaurentSeries phi = solve_branch(f, curve, true, jet_length + 1);
        std::vector<FieldElement> alphas;
        for (int i = 1; i <= jet_length; ++i) alphas.push_back(phi.coeff(i));
        return CurveJet::transversal(f, std::move(alphas));
    }
    if (c_t.is_zero())
        throw DomainError(
            "curve is tangent to the branch U=0 and belongs to no family T_r");

    // tangent branch: two passes, the first to discover r = val(psi)
    int prec = jet_length + 65;
    LaurentSeries psi = solve_branch(f, curve, false, prec);
    if (psi.is_zero())
        throw DomainError("curve coincides with the branch component T=0");
    int r = psi.val();
    if (r + jet_length > prec)
        psi = solve_branch(f, curve, false, r + jet_length + 1);
    std::vector<FieldElement> betas;
    for (int w = r; w < r + jet_length; ++w) betas.push_back(psi.coeff(w));
    return CurveJet::tangent(f, r, std::move(betas));
}

}  // namespace asjet
