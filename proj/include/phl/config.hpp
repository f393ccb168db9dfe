#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "phl/higgs.hpp"
#include "phl/torus.hpp"

namespace phl {

// Validation failure; the message names the offending key as section.key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Missing or unreadable file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FourierTerm {
    int kx = 0;
    int ky = 0;
    std::complex<double> coeff;

    bool operator==(const FourierTerm&) const = default;
};

// One gamma_i: a constant, a trigonometric polynomial sum c exp(2 pi i (kx s + ky t)) in the lattice
// coordinates, or a CSV grid (n real columns, or 2n columns of interleaved real and imaginary parts).
struct GammaSpec {
    enum class Kind { constant, fourier, csv };
    Kind kind = Kind::constant;
    std::complex<double> value{1.0, 0.0};
    std::vector<FourierTerm> terms;
    std::string path;  // relative paths resolve against the config directory

    bool operator==(const GammaSpec&) const = default;
};

// Which solution of the Hitchin system the geometric commands run on.
enum class FieldKind { solved, constant, chart, fuchsian, split };

struct RunConfig {
    struct Domain {
        int n = 32;
        std::complex<double> modulus{0.0, 1.0};
        bool operator==(const Domain&) const = default;
    } domain;

    struct Higgs {
        int m = 1;
        int genus = 2;
        int degree = 0;
        std::vector<GammaSpec> gammas;  // gamma_1 .. gamma_m
        bool operator==(const Higgs&) const = default;
    } higgs;

    struct Solver {
        double tol = 1e-10;
        int max_iter = 50;
        DiffBackend backend = DiffBackend::spectral;
        bool operator==(const Solver&) const = default;
    } solver;

    struct Geometry {
        FieldKind field = FieldKind::solved;
        std::complex<double> chart_a{0.1, 0.05};  // coefficient of the chart w = z + a z^2 / 2
        bool operator==(const Geometry&) const = default;
    } geometry;

    struct Transport {
        double step = 1e-3;
        std::vector<std::complex<double>> path{{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}};
        std::complex<double> centre{0.0, 0.0};
        bool operator==(const Transport&) const = default;
    } transport;

    struct Devmap {
        int per_axis = 16;
        double radius = 2.0;
        bool operator==(const Devmap&) const = default;
    } devmap;

    struct Report {
        std::string out = "out";
        bool operator==(const Report&) const = default;
    } report;

    std::filesystem::path base_dir;  // directory of the config file; not serialised

    bool operator==(const RunConfig& other) const;

    // Range checks on every field; throws ConfigError. File existence is checked when loading.
    void validate() const;
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
// Parses and validates, then checks that every referenced CSV exists. Throws IoError if the
// file cannot be read, ConfigError otherwise.
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

std::string to_string(FieldKind kind);
std::string to_string(DiffBackend backend);

// Gamma grids on the configured torus. Throws IoError for unreadable CSV grids.
HiggsData build_higgs(const RunConfig& config);
TorusGrid build_grid(const RunConfig& config);

}  // namespace phl
