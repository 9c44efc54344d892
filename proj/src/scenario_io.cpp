#include "tslice/scenario_io.hpp"

#include "tslice/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace tslice {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"grid", {"dim", "xmin", "xmax", "ymin", "ymax", "h"}},
        {"time", {"T", "slices", "substeps"}},
        {"domain", {"type", "left", "right", "jumps", "phi"}},
        {"flux", {"type", "p", "eps_reg", "a1", "a2", "c", "alpha", "b", "d", "C_z", "omega"}},
        {"data", {"u0", "psi", "source"}},
        {"solver", {"newton_tol", "max_newton", "max_picard"}},
        {"output", {"dir", "frames"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// Splits at `sep` outside parentheses.
std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

struct Document {
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::map<std::string, int> section_line;
};

Document tokenize(std::string_view text, std::vector<std::string>& problems) {
    Document doc;
    std::string current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line;
        bool quoted = false;
        for (char ch : raw) {
            if (ch == '"') quoted = !quoted;
            if (ch == '#' && !quoted) break;
            line.push_back(ch);
        }
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (quoted) {
            problems.push_back(where + "unterminated quoted value");
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                problems.push_back(where + "malformed section header '" + line + "'");
                current.clear();
                continue;
            }
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known_keys().contains(current)) {
                problems.push_back(where + "unknown section [" + current + "]");
            } else if (doc.section_line.contains(current)) {
                problems.push_back(where + "duplicate section [" + current + "]");
            } else {
                doc.section_line[current] = line_no;
                doc.sections[current];
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back(where + "expected key = value");
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        else if (value.find('"') != std::string::npos) {
            problems.push_back(where + "stray quote in value of '" + key + "'");
            continue;
        }
        if (current.empty()) {
            problems.push_back(where + "key '" + key + "' outside any section");
            continue;
        }
        if (!known_keys().contains(current)) continue;
        if (!known_keys().at(current).contains(key)) {
            problems.push_back(where + "unknown key '" + key + "' in section [" + current + "]");
            continue;
        }
        auto& sec = doc.sections[current];
        if (sec.contains(key)) {
            problems.push_back(where + "duplicate key '" + key + "' in section [" + current + "]");
            continue;
        }
        sec[key] = Entry{value, line_no};
    }
    return doc;
}

class Reader {
public:
    Reader(const Document& doc, std::vector<std::string>& problems) : doc_(doc), problems_(problems) {}

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = doc_.sections.find(sec);
        if (s == doc_.sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
    bool has(const std::string& sec, const std::string& key) const { return find(sec, key) != nullptr; }

    const Entry* require(const std::string& sec, const std::string& key) {
        const Entry* e = find(sec, key);
        if (!e) problems_.push_back("missing required key '" + key + "' in section [" + sec + "]");
        return e;
    }

    std::optional<double> number(const std::string& sec, const std::string& key, std::optional<double> fallback) {
        const Entry* e = fallback ? find(sec, key) : require(sec, key);
        if (!e) return fallback;
        std::size_t used = 0;
        try {
            const double v = std::stod(e->value, &used);
            if (used == e->value.size() && std::isfinite(v)) return v;
        } catch (const std::exception&) {
        }
        problems_.push_back(at(*e) + "'" + key + "' must be a finite number, got '" + e->value + "'");
        return std::nullopt;
    }

    std::optional<int> integer(const std::string& sec, const std::string& key, std::optional<int> fallback) {
        const Entry* e = fallback ? find(sec, key) : require(sec, key);
        if (!e) return fallback;
        std::size_t used = 0;
        try {
            const long v = std::stol(e->value, &used);
            if (used == e->value.size() && v >= INT32_MIN && v <= INT32_MAX) return static_cast<int>(v);
        } catch (const std::exception&) {
        }
        problems_.push_back(at(*e) + "'" + key + "' must be an integer, got '" + e->value + "'");
        return std::nullopt;
    }

    std::optional<Expr> expr(const std::string& key, const Entry& e, std::string_view src, std::set<Var> allowed) {
        try {
            Expr x = Expr::parse(src);
            for (Var v : {Var::t, Var::x, Var::y, Var::z, Var::xi1, Var::xi2, Var::r}) {
                if (x.uses(v) && !allowed.contains(v)) {
                    problems_.push_back(at(e) + "'" + key + "' may not use variable '" + var_name(v) + "'");
                    return std::nullopt;
                }
            }
            return x;
        } catch (const Error& err) {
            problems_.push_back(at(e) + "'" + key + "': " + err.what());
            return std::nullopt;
        }
    }

    std::optional<Expr> expr(const std::string& sec, const std::string& key, std::set<Var> allowed,
                             std::optional<Expr> fallback = std::nullopt) {
        const Entry* e = fallback ? find(sec, key) : require(sec, key);
        if (!e) return fallback;
        return expr(key, *e, e->value, std::move(allowed));
    }

    void forbid(const std::string& sec, const std::string& key, const std::string& why) {
        if (const Entry* e = find(sec, key)) problems_.push_back(at(*e) + "'" + key + "' " + why);
    }

    static std::string at(const Entry& e) { return "line " + std::to_string(e.line) + ": "; }

private:
    const Document& doc_;
    std::vector<std::string>& problems_;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote(const Expr& e) { return "\"" + e.to_string() + "\""; }

} // namespace

Scenario parse_scenario(std::string_view text) {
    std::vector<std::string> problems;
    const Document doc = tokenize(text, problems);
    for (const char* sec : {"grid", "time", "domain", "flux", "data"})
        if (!doc.section_line.contains(sec)) problems.push_back(std::string("missing section [") + sec + "]");
    Reader rd(doc, problems);
    Scenario sc;
    bool ok = true;
    auto take = [&ok](auto opt, auto& dst) {
        if (opt)
            dst = *opt;
        else
            ok = false;
    };

    // [grid]
    int dim = 1;
    take(rd.integer("grid", "dim", std::nullopt), dim);
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    double h = 1.0;
    take(rd.number("grid", "xmin", std::nullopt), lo[0]);
    take(rd.number("grid", "xmax", std::nullopt), hi[0]);
    take(rd.number("grid", "h", std::nullopt), h);
    if (dim == 2) {
        take(rd.number("grid", "ymin", std::nullopt), lo[1]);
        take(rd.number("grid", "ymax", std::nullopt), hi[1]);
    } else {
        rd.forbid("grid", "ymin", "applies only to dim = 2");
        rd.forbid("grid", "ymax", "applies only to dim = 2");
    }
    if (dim != 1 && dim != 2) {
        problems.push_back("grid: dim must be 1 or 2");
        ok = false;
    }
    sc.grid.dim = dim;
    sc.grid.origin = lo;
    sc.grid.spacing = {h, dim == 2 ? h : 1.0};
    if (!(h > 0.0)) {
        problems.push_back("grid: h must be positive");
        ok = false;
    } else {
        for (int a = 0; a < dim; ++a) {
            const double cells = (hi[a] - lo[a]) / h;
            const double rounded = std::round(cells);
            if (!(cells > 0.0) || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
                problems.push_back(std::string("grid: h must divide ") + (a == 0 ? "xmax - xmin" : "ymax - ymin") +
                                   " into a positive whole number of cells");
                ok = false;
            } else {
                sc.grid.counts[static_cast<std::size_t>(a)] = static_cast<int>(rounded);
            }
        }
    }

    // [time]
    double T = 1.0;
    take(rd.number("time", "T", std::nullopt), T);
    take(rd.integer("time", "slices", std::nullopt), sc.n_slices);
    take(rd.integer("time", "substeps", std::nullopt), sc.substeps);
    if (!(T > 0.0)) {
        problems.push_back("time: T must be positive");
        ok = false;
    }

    // [domain]
    const std::set<Var> tx{Var::t, Var::x, Var::y};
    const Entry* type = rd.require("domain", "type");
    if (type && type->value == "moving_intervals") {
        rd.forbid("domain", "phi", "applies only to implicit domains");
        if (dim != 1) {
            problems.push_back(Reader::at(*type) + "moving_intervals domains are one-dimensional");
            ok = false;
        }
        IntervalTrack track;
        std::optional<Expr> l = rd.expr("domain", "left", {Var::t});
        std::optional<Expr> r = rd.expr("domain", "right", {Var::t});
        if (l && r) {
            track.left.push_back(*l);
            track.right.push_back(*r);
        } else {
            ok = false;
        }
        if (const Entry* j = rd.find("domain", "jumps")) {
            for (const std::string& piece : split_top(j->value, ';')) {
                const auto colon = piece.find(':');
                const std::vector<std::string> ends =
                    colon == std::string::npos ? std::vector<std::string>{} : split_top(piece.substr(colon + 1), ',');
                if (ends.size() != 2) {
                    problems.push_back(Reader::at(*j) + "jump '" + piece + "' must read t: left, right");
                    ok = false;
                    continue;
                }
                std::size_t used = 0;
                double tj = 0.0;
                try {
                    tj = std::stod(trim(piece.substr(0, colon)), &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0) {
                    problems.push_back(Reader::at(*j) + "jump time in '" + piece + "' is not a number");
                    ok = false;
                    continue;
                }
                auto jl = rd.expr("jumps", *j, ends[0], {Var::t});
                auto jr = rd.expr("jumps", *j, ends[1], {Var::t});
                if (!jl || !jr) {
                    ok = false;
                    continue;
                }
                track.starts.push_back(tj);
                track.left.push_back(*jl);
                track.right.push_back(*jr);
            }
        }
        if (ok) sc.domain = TimeDomain::moving_intervals({std::move(track)}, T);
    } else if (type && type->value == "implicit") {
        rd.forbid("domain", "left", "applies only to moving_intervals domains");
        rd.forbid("domain", "right", "applies only to moving_intervals domains");
        std::vector<double> starts{0.0};
        std::vector<Expr> phis;
        if (auto phi = rd.expr("domain", "phi", tx))
            phis.push_back(*phi);
        else
            ok = false;
        if (const Entry* j = rd.find("domain", "jumps")) {
            for (const std::string& piece : split_top(j->value, ';')) {
                const auto colon = piece.find(':');
                double tj = 0.0;
                std::size_t used = 0;
                if (colon != std::string::npos) {
                    try {
                        tj = std::stod(trim(piece.substr(0, colon)), &used);
                    } catch (const std::exception&) {
                        used = 0;
                    }
                }
                if (used == 0) {
                    problems.push_back(Reader::at(*j) + "jump '" + piece + "' must read t: phi");
                    ok = false;
                    continue;
                }
                auto phi = rd.expr("jumps", *j, piece.substr(colon + 1), tx);
                if (!phi) {
                    ok = false;
                    continue;
                }
                starts.push_back(tj);
                phis.push_back(*phi);
            }
        }
        Box search{lo, hi};
        if (dim == 1) {
            search.lo[1] = 0.0;
            search.hi[1] = 0.0;
        }
        if (ok) sc.domain = TimeDomain::implicit(dim, std::move(starts), std::move(phis), search, T);
    } else {
        if (type) problems.push_back(Reader::at(*type) + "domain type must be moving_intervals or implicit");
        ok = false;
    }

    // [flux]
    const Entry* ftype = rd.require("flux", "type");
    const std::string fkind = ftype ? ftype->value : "";
    const std::set<std::string> custom_only{"a1", "a2", "c", "alpha", "b", "d", "C_z", "omega"};
    if (fkind == "p_laplacian" || fkind == "z_modulated") {
        for (const auto& key : custom_only) rd.forbid("flux", key, "applies only to custom fluxes");
        double p = 2.0;
        double eps = kDefaultEpsReg;
        take(rd.number("flux", "p", std::nullopt), p);
        take(rd.number("flux", "eps_reg", kDefaultEpsReg), eps);
        sc.flux = fkind == "p_laplacian" ? FluxModel::p_laplacian(p, eps) : FluxModel::z_modulated(p, eps);
    } else if (fkind == "linear_diffusion") {
        for (const auto& key : custom_only) rd.forbid("flux", key, "applies only to custom fluxes");
        rd.forbid("flux", "eps_reg", "does not apply to linear diffusion");
        sc.flux = FluxModel::linear_diffusion();
        if (auto p = rd.number("flux", "p", 2.0); p && *p != 2.0)
            problems.push_back("flux: linear_diffusion has p = 2");
    } else if (fkind == "custom") {
        rd.forbid("flux", "eps_reg", "does not apply to custom fluxes");
        const std::set<Var> flux_vars{Var::t, Var::x, Var::y, Var::z, Var::xi1, Var::xi2};
        double p = 2.0;
        StructuralConstants k;
        take(rd.number("flux", "p", std::nullopt), p);
        take(rd.number("flux", "c", std::nullopt), k.growth_c);
        take(rd.number("flux", "alpha", std::nullopt), k.coercivity_alpha);
        take(rd.number("flux", "b", 0.0), k.lower_b);
        take(rd.number("flux", "d", 0.0), k.lower_d);
        take(rd.number("flux", "C_z", 0.0), k.z_lipschitz);
        take(rd.expr("flux", "omega", {Var::r}, Expr()), k.time_modulus);
        Expr a1;
        Expr a2;
        take(rd.expr("flux", "a1", flux_vars), a1);
        take(rd.expr("flux", "a2", flux_vars, Expr()), a2);
        if (dim == 1 && !a2.is_zero()) problems.push_back("flux: a2 must be 0 (or absent) in one dimension");
        sc.flux = FluxModel::custom(a1, a2, p, k);
    } else {
        if (ftype) problems.push_back(Reader::at(*ftype) + "flux type must be p_laplacian, linear_diffusion, z_modulated or custom");
        ok = false;
    }

    // [data]
    take(rd.expr("data", "u0", {Var::x, Var::y}), sc.u0);
    take(rd.expr("data", "psi", tx), sc.boundary.psi);
    take(rd.expr("data", "source", tx, Expr()), sc.source);

    // [solver], [output]
    take(rd.number("solver", "newton_tol", sc.solver.newton_tol), sc.solver.newton_tol);
    take(rd.integer("solver", "max_newton", sc.solver.max_newton), sc.solver.max_newton);
    take(rd.integer("solver", "max_picard", sc.solver.max_picard), sc.solver.max_picard);
    if (const Entry* d = rd.find("output", "dir")) sc.output.dir = d->value;
    if (const Entry* f = rd.find("output", "frames")) {
        if (f->value == "all")
            sc.output.frames = FrameMode::all;
        else if (f->value == "knots")
            sc.output.frames = FrameMode::knots;
        else
            problems.push_back(Reader::at(*f) + "frames must be all or knots");
    }

    if (ok && problems.empty()) {
        for (auto& p : sc.problems()) problems.push_back(p);
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return sc;
}

Scenario load_scenario(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string print_scenario(const Scenario& sc) {
    std::ostringstream os;
    const Grid& g = sc.grid;
    const Point up = g.upper();
    os << "[grid]\ndim = " << g.dim << "\nxmin = " << num(g.origin[0]) << "\nxmax = " << num(up[0]) << "\n";
    if (g.dim == 2) os << "ymin = " << num(g.origin[1]) << "\nymax = " << num(up[1]) << "\n";
    os << "h = " << num(g.spacing[0]) << "\n\n";

    os << "[time]\nT = " << num(sc.horizon()) << "\nslices = " << sc.n_slices << "\nsubsteps = " << sc.substeps
       << "\n\n";

    os << "[domain]\n";
    const TimeDomain& dom = sc.domain;
    if (dom.kind() == TimeDomain::Kind::moving_intervals) {
        if (dom.tracks().size() != 1)
            throw Error(ErrorKind::validation, "the scenario format holds exactly one interval track");
        const IntervalTrack& tr = dom.tracks().front();
        os << "type = moving_intervals\nleft = " << quote(tr.left[0]) << "\nright = " << quote(tr.right[0]) << "\n";
        if (tr.starts.size() > 1) {
            os << "jumps = \"";
            for (std::size_t j = 1; j < tr.starts.size(); ++j)
                os << (j > 1 ? "; " : "") << num(tr.starts[j]) << ": " << tr.left[j].to_string() << ", "
                   << tr.right[j].to_string();
            os << "\"\n";
        }
    } else {
        const auto& starts = dom.implicit_starts();
        const auto& phi = dom.implicit_phi();
        os << "type = implicit\nphi = " << quote(phi[0]) << "\n";
        if (starts.size() > 1) {
            os << "jumps = \"";
            for (std::size_t j = 1; j < starts.size(); ++j)
                os << (j > 1 ? "; " : "") << num(starts[j]) << ": " << phi[j].to_string();
            os << "\"\n";
        }
    }
    os << "\n[flux]\ntype = " << to_string(sc.flux.kind) << "\n";
    switch (sc.flux.kind) {
    case FluxKind::linear_diffusion: break;
    case FluxKind::p_laplacian:
    case FluxKind::z_modulated:
        os << "p = " << num(sc.flux.p) << "\neps_reg = " << num(sc.flux.eps_reg) << "\n";
        break;
    case FluxKind::custom: {
        const auto& k = sc.flux.constants;
        os << "p = " << num(sc.flux.p) << "\na1 = " << quote(sc.flux.a1) << "\na2 = " << quote(sc.flux.a2)
           << "\nc = " << num(k.growth_c) << "\nalpha = " << num(k.coercivity_alpha) << "\nb = " << num(k.lower_b)
           << "\nd = " << num(k.lower_d) << "\nC_z = " << num(k.z_lipschitz) << "\nomega = " << quote(k.time_modulus)
           << "\n";
        break;
    }
    }
    os << "\n[data]\nu0 = " << quote(sc.u0) << "\npsi = " << quote(sc.boundary.psi) << "\nsource = " << quote(sc.source)
       << "\n\n";
    os << "[solver]\nnewton_tol = " << num(sc.solver.newton_tol) << "\nmax_newton = " << sc.solver.max_newton
       << "\nmax_picard = " << sc.solver.max_picard << "\n\n";
    os << "[output]\ndir = \"" << sc.output.dir << "\"\nframes = " << (sc.output.frames == FrameMode::all ? "all" : "knots")
       << "\n";
    return os.str();
}

std::string scenario_hash(const Scenario& sc) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : print_scenario(sc)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::size_t> selected_stamps(const SpaceTimeField& field, FrameMode mode) {
    std::vector<std::size_t> out;
    if (mode == FrameMode::all) {
        for (std::size_t i = 0; i < field.stamp_count(); ++i) out.push_back(i);
        return out;
    }
    for (std::size_t k = 0; k < field.plan.slice_count(); ++k) out.push_back(field.slice_stamps(static_cast<int>(k)).first);
    out.push_back(field.stamp_count() - 1);
    return out;
}

std::vector<fs::path> write_frames(const SpaceTimeField& field, const Scenario& sc, const fs::path& dir,
                                   FrameMode mode) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir.string() + "': " + ec.message());

    const Grid& g = sc.grid;
    std::vector<fs::path> files;
    nlohmann::json frames = nlohmann::json::array();
    const auto stamps = selected_stamps(field, mode);
    for (std::size_t i = 0; i < stamps.size(); ++i) {
        const std::size_t s = stamps[i];
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05zu.txt", i);
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
        out << (g.dim == 2 ? "# t x y u flag u_ext\n" : "# t x u flag u_ext\n");
        const DomainMask& mask = field.mask_at(s);
        const std::string t = num(field.times[s]);
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            const Point x = g.position(n);
            out << t << ' ' << num(x[0]);
            if (g.dim == 2) out << ' ' << num(x[1]);
            out << ' ' << num(field.frames[s][n]) << ' ' << static_cast<int>(mask.state[n]) << ' '
                << num(field.extended_frames[s][n]) << '\n';
        }
        if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
        frames.push_back({{"file", name}, {"t", field.times[s]}, {"slice", field.slice_of[s]}, {"stamp", s}});
        files.push_back(path);
    }
    nlohmann::json manifest{{"frames", frames},
                            {"knots", field.plan.knots},
                            {"delta", field.plan.delta},
                            {"mode", mode == FrameMode::all ? "all" : "knots"},
                            {"dim", g.dim},
                            {"nodes", g.node_count()},
                            {"scenario_hash", scenario_hash(sc)}};
    const fs::path mpath = dir / "manifest.json";
    std::ofstream mout(mpath, std::ios::binary);
    if (!mout) throw Error(ErrorKind::io, "cannot write '" + mpath.string() + "'");
    mout << manifest.dump(2) << '\n';
    files.push_back(mpath);
    return files;
}

FrameFile read_frame(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read frame '" + path.string() + "'");
    FrameFile f;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            f.dim = line.find(" y ") != std::string::npos ? 2 : 1;
            continue;
        }
        std::istringstream row(line);
        std::vector<std::string> cols;
        for (std::string c; row >> c;) cols.push_back(c);
        if (cols.size() != static_cast<std::size_t>(4 + f.dim))
            throw Error(ErrorKind::io, path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        auto d = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
        std::size_t c = 0;
        f.t.push_back(d(cols[c++]));
        Point x{d(cols[c++]), 0.0};
        if (f.dim == 2) x[1] = d(cols[c++]);
        f.x.push_back(x);
        f.u.push_back(d(cols[c++]));
        f.flag.push_back(std::stoi(cols[c++]));
        f.u_ext.push_back(d(cols[c++]));
    }
    return f;
}

nlohmann::json to_json(const EstimateReport& r) {
    return {{"name", r.name}, {"lhs", r.lhs},   {"rhs", r.rhs},        {"margin", r.margin},
            {"pass", r.pass}, {"tolerance", r.tolerance}, {"details", r.details}};
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json slices = nlohmann::json::array();
    for (const auto& s : r.slices)
        slices.push_back({{"slice", s.slice},
                          {"t_begin", s.t_begin},
                          {"t_end", s.t_end},
                          {"active_nodes", s.active_nodes},
                          {"newton_iterations", s.newton_iterations},
                          {"picard_iterations", s.picard_iterations},
                          {"max_residual", s.max_residual}});
    return {{"slices", slices}, {"wall_seconds", r.wall_seconds}};
}

nlohmann::json to_json(const StructureReport& r) {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : r.conditions)
        conds.push_back({{"name", c.name}, {"worst_margin", c.worst_margin}, {"worst_raw_margin", c.worst_raw_margin},
                         {"pass", c.pass}});
    return {{"conditions", conds}, {"tolerance", r.tolerance}, {"samples", r.samples}, {"seed", r.seed},
            {"pass", r.pass()}};
}

nlohmann::json to_json(const RefinementStudy& s) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : s.levels)
        levels.push_back({{"n_slices", l.n_slices},
                          {"substeps", l.substeps},
                          {"delta", l.delta},
                          {"tau", l.tau},
                          {"slab_hausdorff", l.slab_hausdorff}});
    return {{"levels", levels},
            {"l1_distances", s.distances},
            {"l1_ratios", s.distance_ratios()},
            {"hausdorff_ratios", s.hausdorff_ratios()},
            {"lipschitz", s.lipschitz}};
}

nlohmann::json to_json(const MmsErrors& e) {
    return {{"linf", e.linf}, {"l1", e.l1}, {"final_time", e.final_time}, {"active_nodes", e.active_nodes}};
}

nlohmann::json plan_preview(const SlicePlan& plan) {
    nlohmann::json slices = nlohmann::json::array();
    for (std::size_t k = 0; k < plan.slice_count(); ++k) {
        nlohmann::json s{{"slice", k},
                         {"t_begin", plan.knots[k]},
                         {"t_end", plan.knots[k + 1]},
                         {"active_nodes", plan.masks[k].active.size()},
                         {"ghost_nodes", plan.masks[k].ghost.size()}};
        if (plan.regions[k].is_interval_set()) {
            nlohmann::json iv = nlohmann::json::array();
            for (const Interval& i : plan.regions[k].intervals()) iv.push_back({i.lo, i.hi});
            s["intervals"] = iv;
        }
        slices.push_back(s);
    }
    return {{"knots", plan.knots}, {"delta", plan.delta}, {"slices", slices}};
}

} // namespace tslice
