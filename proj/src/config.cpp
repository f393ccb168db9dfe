#include "phl/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phl/report_io.hpp"

namespace phl {

namespace pt = boost::property_tree;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::complex<double> z) { return fmt(z.real()) + " " + fmt(z.imag()); }

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

// Whitespace-separated numbers; every token must parse completely.
std::vector<double> numbers(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) throw ConfigError(key + ": '" + token + "' is not a number");
        out.push_back(v);
    }
    return out;
}

double real_value(const std::string& key, const std::string& text) {
    const auto v = numbers(key, text);
    if (v.size() != 1) throw ConfigError(key + ": expected one number, got '" + text + "'");
    return v.front();
}

int int_value(const std::string& key, const std::string& text) {
    const double v = real_value(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return static_cast<int>(v);
}

std::complex<double> complex_value(const std::string& key, const std::string& text) {
    const auto v = numbers(key, text);
    if (v.size() != 2) throw ConfigError(key + ": expected 'real imag', got '" + text + "'");
    return {v[0], v[1]};
}

std::vector<std::complex<double>> point_list(const std::string& key, const std::string& text) {
    std::vector<std::complex<double>> out;
    for (const auto& item : split(text, '|')) out.push_back(complex_value(key, item));
    return out;
}

GammaSpec gamma_value(const std::string& key, const std::string& text) {
    const std::string body = trim(text);
    const auto space = body.find_first_of(" \t");
    const std::string kind = body.substr(0, space);
    const std::string rest = space == std::string::npos ? std::string{} : trim(body.substr(space));
    GammaSpec spec;
    if (kind == "constant") {
        spec.kind = GammaSpec::Kind::constant;
        spec.value = complex_value(key, rest);
    } else if (kind == "fourier") {
        spec.kind = GammaSpec::Kind::fourier;
        for (const auto& item : split(rest, '|')) {
            const auto v = numbers(key, item);
            if (v.size() != 4 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
                throw ConfigError(key + ": fourier terms are 'kx ky real imag', got '" + item + "'");
            }
            spec.terms.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), {v[2], v[3]}});
        }
    } else if (kind == "csv") {
        spec.kind = GammaSpec::Kind::csv;
        spec.path = rest;
    } else {
        throw ConfigError(key + ": unknown gamma kind '" + kind + "' (constant, fourier, csv)");
    }
    return spec;
}

std::string gamma_text(const GammaSpec& spec) {
    switch (spec.kind) {
        case GammaSpec::Kind::constant:
            return "constant " + fmt(spec.value);
        case GammaSpec::Kind::fourier: {
            std::string out = "fourier";
            for (std::size_t k = 0; k < spec.terms.size(); ++k) {
                const auto& t = spec.terms[k];
                out += (k == 0 ? " " : " | ") + std::to_string(t.kx) + " " + std::to_string(t.ky) + " " + fmt(t.coeff);
            }
            return out;
        }
        case GammaSpec::Kind::csv:
            return "csv " + spec.path;
    }
    return {};
}

FieldKind field_value(const std::string& key, const std::string& text) {
    for (const auto kind : {FieldKind::solved, FieldKind::constant, FieldKind::chart, FieldKind::fuchsian,
                            FieldKind::split}) {
        if (to_string(kind) == text) return kind;
    }
    throw ConfigError(key + ": unknown field '" + text + "' (solved, constant, chart, fuchsian, split)");
}

DiffBackend backend_value(const std::string& key, const std::string& text) {
    if (text == "spectral") return DiffBackend::spectral;
    if (text == "stencil") return DiffBackend::stencil;
    throw ConfigError(key + ": unknown backend '" + text + "' (spectral, stencil)");
}

const std::set<std::string>& known_keys(const std::string& section) {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"domain", {"n", "modulus"}},
        {"higgs", {"m", "genus", "degree"}},
        {"solver", {"tol", "max_iter", "backend"}},
        {"geometry", {"field", "chart_a"}},
        {"transport", {"step", "path", "centre"}},
        {"devmap", {"per_axis", "radius"}},
        {"report", {"out"}},
    };
    const auto it = keys.find(section);
    if (it == keys.end()) throw ConfigError(section + ": unknown section");
    return it->second;
}

bool is_gamma_key(const std::string& key) {
    return key.size() > 5 && key.rfind("gamma", 0) == 0 &&
           key.find_first_not_of("0123456789", 5) == std::string::npos;
}

}  // namespace

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::solved: return "solved";
        case FieldKind::constant: return "constant";
        case FieldKind::chart: return "chart";
        case FieldKind::fuchsian: return "fuchsian";
        case FieldKind::split: return "split";
    }
    return "?";
}

std::string to_string(DiffBackend backend) { return backend == DiffBackend::spectral ? "spectral" : "stencil"; }

bool RunConfig::operator==(const RunConfig& other) const {
    return domain == other.domain && higgs == other.higgs && solver == other.solver && geometry == other.geometry &&
           transport == other.transport && devmap == other.devmap && report == other.report;
}

void RunConfig::validate() const {
    if (domain.n < 4 || domain.n > 4096) throw ConfigError("domain.n: must lie in [4, 4096]");
    if (!(domain.modulus.imag() > 0.0)) throw ConfigError("domain.modulus: imaginary part must be positive");
    if (higgs.m < 1 || higgs.m > 8) throw ConfigError("higgs.m: must lie in [1, 8]");
    if (higgs.genus < 2) throw ConfigError("higgs.genus: must be at least 2");
    if (static_cast<int>(higgs.gammas.size()) != higgs.m) {
        throw ConfigError("higgs.gamma" + std::to_string(higgs.gammas.size() + 1) + ": expected gamma1 .. gamma" +
                          std::to_string(higgs.m));
    }
    for (std::size_t i = 0; i < higgs.gammas.size(); ++i) {
        const auto& g = higgs.gammas[i];
        const std::string key = "higgs.gamma" + std::to_string(i + 1);
        if (g.kind == GammaSpec::Kind::fourier && g.terms.empty()) throw ConfigError(key + ": no fourier terms");
        if (g.kind == GammaSpec::Kind::csv && g.path.empty()) throw ConfigError(key + ": empty csv path");
        if (!std::isfinite(std::abs(g.value))) throw ConfigError(key + ": not finite");
    }
    if (!(solver.tol > 0.0 && solver.tol < 1.0)) throw ConfigError("solver.tol: must lie in (0, 1)");
    if (solver.max_iter < 1 || solver.max_iter > 10000) throw ConfigError("solver.max_iter: must lie in [1, 10000]");
    if (!(transport.step > 0.0 && transport.step <= 0.1)) throw ConfigError("transport.step: must lie in (0, 0.1]");
    if (transport.path.size() < 2) throw ConfigError("transport.path: need at least two points");
    if (geometry.field == FieldKind::fuchsian || geometry.field == FieldKind::split) {
        for (const auto& z : transport.path) {
            if (!(std::abs(z) < 0.9)) throw ConfigError("transport.path: points must satisfy |z| < 0.9 on the disk");
        }
        if (!(std::abs(transport.centre) < 0.3)) throw ConfigError("transport.centre: must satisfy |z| < 0.3 on the disk");
    }
    if (geometry.field == FieldKind::split && higgs.m != 2) throw ConfigError("geometry.field: split needs higgs.m = 2");
    if (devmap.per_axis < 1 || devmap.per_axis > 512) throw ConfigError("devmap.per_axis: must lie in [1, 512]");
    if (!(devmap.radius > 0.0 && devmap.radius <= 10.0)) throw ConfigError("devmap.radius: must lie in (0, 10]");
    if (report.out.empty()) throw ConfigError("report.out: must not be empty");
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    RunConfig cfg;
    cfg.base_dir = base_dir;
    std::map<int, GammaSpec> gammas;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError(section + ": key outside any section");
        const auto& keys = known_keys(section);
        for (const auto& [name, node] : body) {
            const std::string key = section + "." + name;
            const std::string value = trim(node.data());
            if (section == "higgs" && is_gamma_key(name)) {
                const int index = int_value(key, name.substr(5));
                if (!gammas.emplace(index, gamma_value(key, value)).second) throw ConfigError(key + ": duplicate");
                continue;
            }
            if (!keys.contains(name)) throw ConfigError(key + ": unknown key");
            if (key == "domain.n") cfg.domain.n = int_value(key, value);
            else if (key == "domain.modulus") cfg.domain.modulus = complex_value(key, value);
            else if (key == "higgs.m") cfg.higgs.m = int_value(key, value);
            else if (key == "higgs.genus") cfg.higgs.genus = int_value(key, value);
            else if (key == "higgs.degree") cfg.higgs.degree = int_value(key, value);
            else if (key == "solver.tol") cfg.solver.tol = real_value(key, value);
            else if (key == "solver.max_iter") cfg.solver.max_iter = int_value(key, value);
            else if (key == "solver.backend") cfg.solver.backend = backend_value(key, value);
            else if (key == "geometry.field") cfg.geometry.field = field_value(key, value);
            else if (key == "geometry.chart_a") cfg.geometry.chart_a = complex_value(key, value);
            else if (key == "transport.step") cfg.transport.step = real_value(key, value);
            else if (key == "transport.path") cfg.transport.path = point_list(key, value);
            else if (key == "transport.centre") cfg.transport.centre = complex_value(key, value);
            else if (key == "devmap.per_axis") cfg.devmap.per_axis = int_value(key, value);
            else if (key == "devmap.radius") cfg.devmap.radius = real_value(key, value);
            else if (key == "report.out") cfg.report.out = value;
        }
    }
    int expected = 1;
    for (auto& [index, spec] : gammas) {
        if (index != expected) throw ConfigError("higgs.gamma" + std::to_string(expected) + ": missing");
        cfg.higgs.gammas.push_back(std::move(spec));
        ++expected;
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    RunConfig cfg = parse_config(in, path.parent_path());
    for (std::size_t i = 0; i < cfg.higgs.gammas.size(); ++i) {
        const auto& g = cfg.higgs.gammas[i];
        if (g.kind == GammaSpec::Kind::csv && !std::filesystem::exists(cfg.base_dir / g.path)) {
            throw ConfigError("higgs.gamma" + std::to_string(i + 1) + ": file not found: " +
                              (cfg.base_dir / g.path).string());
        }
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[domain]\n"
        << "n = " << cfg.domain.n << '\n'
        << "modulus = " << fmt(cfg.domain.modulus) << "\n\n";
    out << "[higgs]\n"
        << "m = " << cfg.higgs.m << '\n'
        << "genus = " << cfg.higgs.genus << '\n'
        << "degree = " << cfg.higgs.degree << '\n';
    for (std::size_t i = 0; i < cfg.higgs.gammas.size(); ++i) {
        out << "gamma" << i + 1 << " = " << gamma_text(cfg.higgs.gammas[i]) << '\n';
    }
    out << "\n[solver]\n"
        << "tol = " << fmt(cfg.solver.tol) << '\n'
        << "max_iter = " << cfg.solver.max_iter << '\n'
        << "backend = " << to_string(cfg.solver.backend) << "\n\n";
    out << "[geometry]\n"
        << "field = " << to_string(cfg.geometry.field) << '\n'
        << "chart_a = " << fmt(cfg.geometry.chart_a) << "\n\n";
    out << "[transport]\n"
        << "step = " << fmt(cfg.transport.step) << '\n'
        << "path = ";
    for (std::size_t k = 0; k < cfg.transport.path.size(); ++k) {
        out << (k == 0 ? "" : " | ") << fmt(cfg.transport.path[k]);
    }
    out << '\n' << "centre = " << fmt(cfg.transport.centre) << "\n\n";
    out << "[devmap]\n"
        << "per_axis = " << cfg.devmap.per_axis << '\n'
        << "radius = " << fmt(cfg.devmap.radius) << "\n\n";
    out << "[report]\n"
        << "out = " << cfg.report.out << '\n';
    return out.str();
}

TorusGrid build_grid(const RunConfig& config) { return TorusGrid(config.domain.n, config.domain.modulus); }

HiggsData build_higgs(const RunConfig& config) {
    const int n = config.domain.n;
    HiggsData data;
    data.m = config.higgs.m;
    data.genus = config.higgs.genus;
    data.degree = config.higgs.degree;
    for (std::size_t k = 0; k < config.higgs.gammas.size(); ++k) {
        const GammaSpec& spec = config.higgs.gammas[k];
        ComplexGrid grid(n, n);
        switch (spec.kind) {
            case GammaSpec::Kind::constant:
                grid.setConstant(spec.value);
                break;
            case GammaSpec::Kind::fourier:
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        std::complex<double> v = 0.0;
                        for (const auto& t : spec.terms) {
                            const double phase = 2.0 * std::numbers::pi * (t.kx * i + t.ky * j) / n;
                            v += t.coeff * std::polar(1.0, phase);
                        }
                        grid(i, j) = v;
                    }
                }
                break;
            case GammaSpec::Kind::csv: {
                const Eigen::MatrixXd raw = read_csv(config.base_dir / spec.path);
                const std::string key = "higgs.gamma" + std::to_string(k + 1);
                if (raw.rows() != n || (raw.cols() != n && raw.cols() != 2 * n)) {
                    throw ConfigError(key + ": csv grid must be n x n or n x 2n with n = " + std::to_string(n));
                }
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        grid(i, j) = raw.cols() == n ? std::complex<double>(raw(i, j), 0.0)
                                                     : std::complex<double>(raw(i, 2 * j), raw(i, 2 * j + 1));
                    }
                }
                break;
            }
        }
        data.gammas.push_back(std::move(grid));
    }
    data.validate();
    return data;
}

}  // namespace phl
