#include "fsi/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fsi/format.hpp"

namespace fsi {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "\n" : "") << v[i];
    return os.str();
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out)
{
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtol(s.c_str(), &end, 10);
    return errno == 0 && end == s.c_str() + s.size();
}

using Setter = std::function<std::string(const std::string&)>;  // returns an error or ""

Setter real(double& target)
{
    return [&target](const std::string& v) -> std::string {
        double x;
        if (!parse_double(v, x)) return "malformed number '" + v + "'";
        target = x;
        return "";
    };
}

Setter integer(int& target)
{
    return [&target](const std::string& v) -> std::string {
        long x;
        if (!parse_long(v, x) || x < -1000000000L || x > 1000000000L) return "malformed integer '" + v + "'";
        target = static_cast<int>(x);
        return "";
    };
}

Setter expression(Expr& target)
{
    return [&target](const std::string& v) -> std::string {
        try {
            target = Expr::parse(v);
        } catch (const ExprError& e) {
            return e.what();
        }
        return "";
    };
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations))
{
}

int RunConfig::steps() const
{
    const int n = static_cast<int>(std::floor(T / params.tau * (1.0 + 1e-12)));
    return n < 1 ? 1 : n;
}

bool operator==(const RunConfig& a, const RunConfig& b)
{
    const Params &p = a.params, &q = b.params;
    return p.gamma == q.gamma && p.a == q.a && p.mu == q.mu && p.lambda == q.lambda && p.eps_up == q.eps_up &&
           p.alpha == q.alpha && p.beta == q.beta && p.L == q.L && p.H == q.H && p.tau == q.tau &&
           p.delta0 == q.delta0 && a.nx == b.nx && a.ny == b.ny && a.T == b.T &&
           a.forcing.fx.source() == b.forcing.fx.source() && a.forcing.fy.source() == b.forcing.fy.source() &&
           a.forcing.g.source() == b.forcing.g.source() && a.rho0.source() == b.rho0.source() &&
           a.ux.source() == b.ux.source() && a.uy.source() == b.uy.source() && a.solver.zeta == b.solver.zeta &&
           a.solver.min_dzeta == b.solver.min_dzeta && a.solver.tol == b.solver.tol &&
           a.solver.max_newton == b.solver.max_newton && a.solver.max_stage_newton == b.solver.max_stage_newton &&
           a.output_dir == b.output_dir && a.stride == b.stride && a.seed == b.seed;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::map<std::string, std::map<std::string, Setter>> table;
    auto& P = c.params;
    table["domain"] = {{"L", real(P.L)}, {"H", real(P.H)}, {"nx", integer(c.nx)}, {"ny", integer(c.ny)}};
    table["fluid"] = {{"gamma", real(P.gamma)}, {"a", real(P.a)}, {"mu", real(P.mu)},
                      {"lambda", real(P.lambda)}, {"eps_up", real(P.eps_up)}};
    table["shell"] = {{"alpha", real(P.alpha)}, {"beta", real(P.beta)}};
    table["time"] = {{"T", real(c.T)}, {"tau", real(P.tau)}};
    table["guard"] = {{"delta0", real(P.delta0)}};
    table["forcing"] = {{"fx", expression(c.forcing.fx)}, {"fy", expression(c.forcing.fy)},
                        {"g", expression(c.forcing.g)}};
    table["initial"] = {{"rho0", expression(c.rho0)}, {"ux", expression(c.ux)}, {"uy", expression(c.uy)}};
    table["solver"] = {{"tol", real(c.solver.tol)},
                       {"max_newton", integer(c.solver.max_newton)},
                       {"max_stage_newton", integer(c.solver.max_stage_newton)},
                       {"min_dzeta", real(c.solver.min_dzeta)},
                       {"zeta", [&c](const std::string& v) -> std::string {
                            std::vector<double> z;
                            for (const auto& item : split_list(v)) {
                                double x;
                                if (!parse_double(item, x)) return "malformed number '" + item + "' in zeta list";
                                z.push_back(x);
                            }
                            c.solver.zeta = z;
                            return "";
                        }}};
    table["output"] = {{"dir", [&c](const std::string& v) -> std::string {
                            if (v.empty()) return "empty output directory";
                            c.output_dir = v;
                            return "";
                        }},
                       {"stride", integer(c.stride)}};
    table["random"] = {{"seed", [&c](const std::string& v) -> std::string {
                           long x;
                           if (!parse_long(v, x) || x < 0) return "malformed seed '" + v + "'";
                           c.seed = static_cast<unsigned long>(x);
                           return "";
                       }}};

    std::vector<std::string> errors;
    std::map<std::string, int> line_of;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto err = [&](int line, const std::string& msg) { errors.push_back("line " + std::to_string(line) + ": " + msg); };
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                err(lineno, "malformed section header '" + line + "'");
                section.clear();
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!table.count(section)) {
                err(lineno, "unknown section [" + section + "]");
                section = "?";
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            err(lineno, "expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (section.empty()) {
            err(lineno, "key '" + key + "' outside any section");
            continue;
        }
        if (section == "?") continue;
        auto it = table[section].find(key);
        if (it == table[section].end()) {
            err(lineno, "unknown key '" + key + "' in [" + section + "]");
            continue;
        }
        if (line_of.count(key)) {
            err(lineno, "duplicate key '" + key + "'");
            continue;
        }
        line_of[key] = lineno;
        if (auto e = it->second(value); !e.empty()) err(lineno, key + ": " + e);
    }

    if (!line_of.count("eps_up")) P.eps_up = default_eps_up(P.gamma);

    auto where = [&](const std::string& msg) {
        const std::string key = msg.substr(0, msg.find(' '));
        auto it = line_of.find(key);
        return it == line_of.end() ? std::string("defaults: ") : "line " + std::to_string(it->second) + ": ";
    };
    std::vector<std::string> inv = P.violations();
    if (c.nx < 2) inv.emplace_back("nx must be at least 2");
    if (c.ny < 2) inv.emplace_back("ny must be at least 2");
    if (!(c.T >= P.tau)) inv.emplace_back("T must be at least tau");
    if (c.stride < 1) inv.emplace_back("stride must be at least 1");
    if (!(c.solver.tol > 0.0)) inv.emplace_back("tol must be positive");
    if (c.solver.max_newton < 1) inv.emplace_back("max_newton must be at least 1");
    if (c.solver.max_stage_newton < 1) inv.emplace_back("max_stage_newton must be at least 1");
    if (!(c.solver.min_dzeta > 0.0 && c.solver.min_dzeta <= 1.0)) inv.emplace_back("min_dzeta outside (0, 1]");
    {
        const auto& z = c.solver.zeta;
        bool ok = z.size() >= 2 && z.front() == 0.0 && z.back() == 1.0;
        for (std::size_t i = 1; ok && i < z.size(); ++i) ok = z[i] > z[i - 1];
        if (!ok) inv.emplace_back("zeta grid must increase strictly from 0 to 1");
    }
    for (const auto& v : inv) errors.push_back(where(v) + v);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError({"cannot read config file '" + path + "'"});
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string print_config(const RunConfig& c)
{
    const Params& p = c.params;
    std::ostringstream os;
    os << "[domain]\nL = " << fmt17(p.L) << "\nH = " << fmt17(p.H) << "\nnx = " << c.nx << "\nny = " << c.ny << "\n\n";
    os << "[fluid]\ngamma = " << fmt17(p.gamma) << "\na = " << fmt17(p.a) << "\nmu = " << fmt17(p.mu)
       << "\nlambda = " << fmt17(p.lambda) << "\neps_up = " << fmt17(p.eps_up) << "\n\n";
    os << "[shell]\nalpha = " << fmt17(p.alpha) << "\nbeta = " << fmt17(p.beta) << "\n\n";
    os << "[time]\nT = " << fmt17(c.T) << "\ntau = " << fmt17(p.tau) << "\n\n";
    os << "[guard]\ndelta0 = " << fmt17(p.delta0) << "\n\n";
    os << "[forcing]\nfx = " << c.forcing.fx.source() << "\nfy = " << c.forcing.fy.source()
       << "\ng = " << c.forcing.g.source() << "\n\n";
    os << "[initial]\nrho0 = " << c.rho0.source() << "\nux = " << c.ux.source() << "\nuy = " << c.uy.source()
       << "\n\n";
    os << "[solver]\ntol = " << fmt17(c.solver.tol) << "\nmax_newton = " << c.solver.max_newton
       << "\nmax_stage_newton = " << c.solver.max_stage_newton << "\nmin_dzeta = " << fmt17(c.solver.min_dzeta)
       << "\nzeta = ";
    for (std::size_t i = 0; i < c.solver.zeta.size(); ++i) os << (i ? ", " : "") << fmt17(c.solver.zeta[i]);
    os << "\n\n[output]\ndir = " << c.output_dir << "\nstride = " << c.stride << "\n\n";
    os << "[random]\nseed = " << c.seed << "\n";
    return os.str();
}

Discretization make_discretization(const RunConfig& c)
{
    return Discretization(build_reference_mesh(c.params.L, c.params.H, c.nx, c.ny), c.params, c.forcing);
}

}  // namespace fsi
