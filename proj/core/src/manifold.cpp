#include "liftgeo/manifold.hpp"

#include <fstream>
#include <sstream>

#include "liftgeo/structure.hpp"

namespace liftgeo {

namespace {

struct FileError : ValidationError {
    FileError(const std::string& origin, int line, const std::string& what)
        : ValidationError(origin + ":" + std::to_string(line) + ": " + what) {}
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Extracts the text between double quotes.
std::string unquote(const std::string& s, const std::string& origin, int line) {
    const size_t a = s.find('"');
    const size_t b = s.rfind('"');
    if (a == std::string::npos || b == a)
        throw FileError(origin, line, "expected a double-quoted expression");
    return s.substr(a + 1, b - a - 1);
}

std::vector<std::string> split_quoted_list(const std::string& s, const std::string& origin,
                                           int line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (true) {
        const size_t a = s.find('"', i);
        if (a == std::string::npos) break;
        const size_t b = s.find('"', a + 1);
        if (b == std::string::npos) throw FileError(origin, line, "unterminated quote");
        out.push_back(s.substr(a + 1, b - a - 1));
        i = b + 1;
    }
    if (out.empty()) throw FileError(origin, line, "expected quoted component list");
    return out;
}

}  // namespace

MetricField ManifoldDefinition::metric() const {
    std::vector<ScalarField> comps;
    comps.reserve(metric_exprs.size());
    for (const auto& e : metric_exprs) comps.push_back(parse(e, dim, false));
    return MetricField(dim, std::move(comps), chart);
}

ConnectionField ManifoldDefinition::connection() const {
    if (levi_civita_connection) return levi_civita(metric());
    std::vector<ScalarField> coeffs;
    coeffs.reserve(gamma_exprs.size());
    for (const auto& e : gamma_exprs) coeffs.push_back(parse(e, dim, false));
    return ConnectionField::explicit_coeffs(dim, std::move(coeffs));
}

ScalarField ManifoldDefinition::function(const std::string& fname) const {
    auto it = functions.find(fname);
    if (it == functions.end())
        throw ValidationError("manifold '" + name + "' has no function named '" + fname + "'");
    return parse(it->second, dim, false);
}

VectorField ManifoldDefinition::field(const std::string& fname) const {
    auto it = vector_fields.find(fname);
    if (it == vector_fields.end())
        throw ValidationError("manifold '" + name + "' has no vector field named '" + fname + "'");
    std::vector<ScalarField> comps;
    for (const auto& e : it->second) comps.push_back(parse(e, dim, false));
    return VectorField(dim, std::move(comps));
}

void ManifoldDefinition::validate(std::uint64_t seed, int samples) const {
    if (dim < 1) throw ValidationError("manifold dimension must be at least 1");
    MetricField g = metric();
    connection();
    Sampler sampler(seed);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < samples; ++i) pts.push_back(sampler.chart_point(chart));
    g.require_spd(pts);
    for (const auto& [fname, expr] : functions) {
        ScalarField f = parse(expr, dim, false);
        for (const auto& p : pts)
            if (f.eval(p) <= 0.0)
                throw ValidationError("function '" + fname +
                                      "' is not strictly positive on the chart");
    }
    for (const auto& [fname, comps] : vector_fields) {
        if (static_cast<int>(comps.size()) != dim)
            throw ValidationError("vector field '" + fname + "' needs dim components");
        for (const auto& e : comps) parse(e, dim, false);
    }
}

ManifoldDefinition parse_manifold(const std::string& text, const std::string& origin) {
    ManifoldDefinition def;
    std::istringstream in(text);
    std::string rawline;
    std::string section;
    int lineno = 0;
    std::map<std::pair<int, int>, std::string> metric_entries;
    std::map<std::tuple<int, int, int>, std::string> gamma_entries;
    std::map<int, Interval> chart_entries;
    bool conn_declared = false;

    while (std::getline(in, rawline)) {
        ++lineno;
        std::string line = trim(rawline);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw FileError(origin, lineno, "malformed section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        if (section == "manifold") {
            const size_t eq = line.find('=');
            if (eq == std::string::npos) throw FileError(origin, lineno, "expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "name") {
                def.name = value;
            } else if (key == "dim") {
                try {
                    def.dim = std::stoi(value);
                } catch (const std::exception&) {
                    throw FileError(origin, lineno, "dim must be an integer");
                }
            } else {
                throw FileError(origin, lineno, "unknown key '" + key + "' in [manifold]");
            }
        } else if (section == "metric") {
            std::istringstream ls(line);
            std::string tag;
            int i, j;
            ls >> tag >> i >> j;
            if (tag != "g" || ls.fail())
                throw FileError(origin, lineno, "expected: g <i> <j> = \"expr\"");
            metric_entries[{std::min(i, j), std::max(i, j)}] = unquote(line, origin, lineno);
        } else if (section == "functions") {
            const size_t eq = line.find('=');
            if (eq == std::string::npos) throw FileError(origin, lineno, "expected name = \"expr\"");
            def.functions[trim(line.substr(0, eq))] = unquote(line, origin, lineno);
        } else if (section == "connection") {
            if (line == "levi-civita") {
                def.levi_civita_connection = true;
                conn_declared = true;
            } else {
                std::istringstream ls(line);
                std::string tag;
                int k, i, j;
                ls >> tag >> k >> i >> j;
                if (tag != "Gamma" || ls.fail())
                    throw FileError(origin, lineno,
                                    "expected 'levi-civita' or: Gamma <k> <i> <j> = \"expr\"");
                def.levi_civita_connection = false;
                conn_declared = true;
                gamma_entries[{k, i, j}] = unquote(line, origin, lineno);
            }
        } else if (section == "chart") {
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw FileError(origin, lineno, "expected: x<i> = (lo, hi)");
            const std::string key = trim(line.substr(0, eq));
            if (key.size() < 2 || key[0] != 'x')
                throw FileError(origin, lineno, "chart keys look like x0, x1, ...");
            int idx = 0;
            try {
                idx = std::stoi(key.substr(1));
            } catch (const std::exception&) {
                throw FileError(origin, lineno, "chart keys look like x0, x1, ...");
            }
            std::string rhs = trim(line.substr(eq + 1));
            double lo, hi;
            char c1, c2, c3;
            std::istringstream rs(rhs);
            rs >> c1 >> lo >> c2 >> hi >> c3;
            if (rs.fail() || c1 != '(' || c2 != ',' || c3 != ')')
                throw FileError(origin, lineno, "expected interval '(lo, hi)'");
            chart_entries[idx] = Interval{lo, hi};
        } else if (section == "fields") {
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw FileError(origin, lineno, "expected: name = (\"e0\", \"e1\", ...)");
            def.vector_fields[trim(line.substr(0, eq))] =
                split_quoted_list(line.substr(eq + 1), origin, lineno);
        } else {
            throw FileError(origin, lineno, "content outside a known section");
        }
    }

    if (def.dim < 1) throw ValidationError(origin + ": [manifold] must declare dim >= 1");
    if (def.name.empty()) def.name = origin;
    const int n = def.dim;
    def.metric_exprs.assign(sym2_size(n), "0");
    bool any_metric = false;
    for (const auto& [ij, expr] : metric_entries) {
        if (ij.second >= n)
            throw ValidationError(origin + ": metric index exceeds dimension");
        def.metric_exprs[sym2_index(ij.first, ij.second)] = expr;
        any_metric = true;
    }
    if (!any_metric) throw ValidationError(origin + ": [metric] section is required");
    if (!conn_declared) def.levi_civita_connection = true;
    if (!def.levi_civita_connection) {
        def.gamma_exprs.assign(n * n * n, "0");
        for (const auto& [kij, expr] : gamma_entries) {
            const auto [k, i, j] = kij;
            if (k >= n || i >= n || j >= n)
                throw ValidationError(origin + ": connection index exceeds dimension");
            def.gamma_exprs[(k * n + i) * n + j] = expr;
        }
    }
    def.chart.assign(n, Interval{-2.0, 2.0});
    for (const auto& [idx, iv] : chart_entries) {
        if (idx >= n) throw ValidationError(origin + ": chart index exceeds dimension");
        def.chart[idx] = iv;
    }
    return def;
}

ManifoldDefinition load_manifold(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open manifold definition '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    ManifoldDefinition def = parse_manifold(buf.str(), path);
    def.validate(12345, 16);
    return def;
}

namespace {

ManifoldDefinition make_builtin(const std::string& name) {
    ManifoldDefinition d;
    d.name = name;
    d.dim = 2;
    d.functions["f"] = "x0 + 2";
    d.functions["h"] = "x1^2 + 1";
    d.functions["f1"] = "x0 + 2";
    d.vector_fields["rotation"] = {"-x1", "x0"};
    d.vector_fields["affine"] = {"0.7*x0 + 0.3*x1 + 0.5", "-0.4*x0 + 1.1*x1 - 0.2"};
    d.vector_fields["quadratic"] = {"x0^2", "x0*x1"};
    d.vector_fields["parallel"] = {"1", "0.5"};
    d.chart.assign(2, Interval{-2.0, 2.0});
    d.metric_exprs.assign(sym2_size(2), "0");
    return d;
}

std::vector<ManifoldDefinition> make_builtins() {
    std::vector<ManifoldDefinition> out;
    {
        ManifoldDefinition d = make_builtin("euclidean2");
        d.metric_exprs[sym2_index(0, 0)] = "1";
        d.metric_exprs[sym2_index(1, 1)] = "1";
        out.push_back(d);
    }
    {
        ManifoldDefinition d = make_builtin("euclidean3");
        d.dim = 3;
        d.chart.assign(3, Interval{-2.0, 2.0});
        d.metric_exprs.assign(sym2_size(3), "0");
        d.metric_exprs[sym2_index(0, 0)] = "1";
        d.metric_exprs[sym2_index(1, 1)] = "1";
        d.metric_exprs[sym2_index(2, 2)] = "1";
        d.vector_fields["rotation"] = {"-x1", "x0", "0"};
        d.vector_fields["affine"] = {"0.7*x0 + 0.3*x1 + 0.5", "-0.4*x0 + 1.1*x1 - 0.2",
                                     "0.2*x2 + 0.1"};
        d.vector_fields["quadratic"] = {"x0^2", "x0*x1", "x2^2"};
        d.vector_fields["parallel"] = {"1", "0.5", "-0.25"};
        out.push_back(d);
    }
    {
        ManifoldDefinition d = make_builtin("polar2");
        d.metric_exprs[sym2_index(0, 0)] = "1";
        d.metric_exprs[sym2_index(1, 1)] = "x0^2";
        d.chart[0] = Interval{0.5, 2.5};
        d.chart[1] = Interval{-3.0, 3.0};
        out.push_back(d);
    }
    {
        ManifoldDefinition d = make_builtin("sphere2");
        d.metric_exprs[sym2_index(0, 0)] = "1";
        d.metric_exprs[sym2_index(1, 1)] = "sin(x0)^2";
        d.chart[0] = Interval{0.2, 2.9};
        d.chart[1] = Interval{-3.0, 3.0};
        out.push_back(d);
    }
    {
        ManifoldDefinition d = make_builtin("hyperbolic2");
        d.metric_exprs[sym2_index(0, 0)] = "1";
        d.metric_exprs[sym2_index(1, 1)] = "sinh(x0)^2";
        d.chart[0] = Interval{0.3, 2.0};
        d.chart[1] = Interval{-3.0, 3.0};
        out.push_back(d);
    }
    {
        ManifoldDefinition d = make_builtin("flat-with-torsion");
        d.metric_exprs[sym2_index(0, 0)] = "1";
        d.metric_exprs[sym2_index(1, 1)] = "1";
        d.levi_civita_connection = false;
        d.gamma_exprs.assign(8, "0");
        d.gamma_exprs[(0 * 2 + 0) * 2 + 1] = "1";   // Gamma^0_{01}
        d.gamma_exprs[(0 * 2 + 1) * 2 + 0] = "-1";  // Gamma^0_{10}
        out.push_back(d);
    }
    return out;
}

const std::vector<ManifoldDefinition>& builtins() {
    static const std::vector<ManifoldDefinition> b = make_builtins();
    return b;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& d : builtins()) out.push_back(d.name);
        return out;
    }();
    return names;
}

ManifoldDefinition builtin_manifold(const std::string& name) {
    for (const auto& d : builtins())
        if (d.name == name) return d;
    throw ValidationError("unknown builtin manifold '" + name + "'");
}

}  // namespace liftgeo
