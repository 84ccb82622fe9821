#include "eqlayer/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eqlayer/errors.hpp"

namespace eqlayer {

std::vector<double> Grid::y_nodes() const {
    std::vector<double> out(ny + 1);
    for (int i = 0; i <= ny; ++i) out[i] = y(i);
    return out;
}

std::vector<double> Grid::z_nodes() const {
    std::vector<double> out(nz + 1);
    for (int j = 0; j <= nz; ++j) out[j] = z(j);
    return out;
}

int Grid::level_of(double zv) const noexcept {
    const double s = (zv - z_min) / hz();
    const long j = std::lround(s);
    if (j < 0 || j > nz || std::abs(s - static_cast<double>(j)) > 1e-9) return -1;
    return static_cast<int>(j);
}

bool Grid::same_as(const Grid& o) const noexcept {
    return ny == o.ny && nz == o.nz && y_max == o.y_max && z_min == o.z_min &&
           z_max == o.z_max && periodic_y == o.periodic_y;
}

void check_grid(const Grid& g) {
    if (g.ny < 1 || g.nz < 1) throw ContractViolation("grid needs at least one cell per direction");
    if (!(g.y_max > 0.0)) throw ContractViolation("grid y extent must be positive");
    if (!(g.z_max > g.z_min)) throw ContractViolation("grid z interval is empty");
}

std::string to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::QuarterPlane: return "I";
        case CaseTag::Strip: return "II";
        case CaseTag::UpperStrip: return "III";
    }
    return "?";
}

CaseTag case_from_string(const std::string& s) {
    if (s == "I" || s == "1" || s == "quarter" || s == "QuarterPlane") return CaseTag::QuarterPlane;
    if (s == "II" || s == "2" || s == "strip" || s == "Strip") return CaseTag::Strip;
    if (s == "III" || s == "3" || s == "upper" || s == "UpperStrip") return CaseTag::UpperStrip;
    throw DomainError("unknown case '" + s + "' (expected I, II or III)");
}

std::string to_string(const LambdaChoice& c) {
    switch (c.kind) {
        case LambdaChoice::Kind::Zero: return "zero";
        case LambdaChoice::Kind::ScaledIdentity: {
            std::ostringstream os;
            os << "identity:" << c.scale;
            return os.str();
        }
        case LambdaChoice::Kind::Spectral: return "spectral";
        case LambdaChoice::Kind::Matrix: return "matrix";
    }
    return "?";
}

Grid make_grid(const DomainCase& d, int ny, int nz, bool periodic_y) {
    Grid g;
    g.ny = ny;
    g.nz = nz;
    g.y_max = d.y_max;
    g.z_min = d.z_begin();
    g.z_max = d.z_end();
    g.periodic_y = periodic_y;
    return g;
}

ProblemSpec make_spec(const DomainCase& domain, int ny, int nz) {
    ProblemSpec spec;
    spec.domain = domain;
    spec.grid = make_grid(domain, ny, nz);
    return spec;
}

CompatibilityIntegral corner_integral(const std::function<double(double)>& f) {
    CompatibilityIntegral out;
    double prev = 0.0;
    double cur = 0.0;
    for (int level = 10; level <= 20; ++level) {
        const long n = 1L << level;
        const double h = 1.0 / static_cast<double>(n);
        double sum = 0.0;
        for (long k = 0; k < n; ++k) {
            const double z = (static_cast<double>(k) + 0.5) * h;
            const double fz = f(z);
            sum += fz * fz / z;
        }
        prev = cur;
        cur = sum * h;
    }
    out.value = cur;
    out.previous = prev;
    const double scale = std::max(std::abs(cur), std::abs(prev));
    out.divergent = !std::isfinite(cur) || (scale > 0.0 && std::abs(cur - prev) > 0.01 * scale);
    return out;
}

ValidationReport validate(const ProblemSpec& spec) {
    ValidationReport rep;
    const auto& d = spec.domain;
    auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };

    if (!(d.y_max > 0.0)) fail("Ymax must be positive");
    switch (d.tag) {
        case CaseTag::QuarterPlane:
            if (!(d.z_max > 0.0)) fail("QuarterPlane requires Zmax > 0");
            break;
        case CaseTag::Strip:
            if (!(d.H > 0.0)) fail("Strip requires H > 0");
            break;
        case CaseTag::UpperStrip:
            if (!(d.H > 0.0)) fail("UpperStrip requires H > 0");
            if (!(d.z_max > d.H)) fail("UpperStrip requires Zmax > H");
            break;
    }

    const Grid& g = spec.grid;
    if (g.ny < 4 || g.nz < 1) fail("grid needs ny >= 4 and nz >= 1");
    if (g.y_max != d.y_max) fail("grid y extent does not match Ymax");
    if (g.z_min != d.z_begin() || g.z_max != d.z_end()) fail("grid z interval does not match the case");

    const auto& bc = spec.bc;
    if (bc.lambda.kind == LambdaChoice::Kind::ScaledIdentity && bc.lambda.scale > 0.0)
        fail("ScaledIdentity lambda must be non-positive");

    const double z0 = d.z_begin();
    if (d.tag != CaseTag::UpperStrip) {
        rep.upsilon = corner_integral([&](double s) { return eval(bc.Upsilon, z0 + s); });
        if (rep.upsilon.divergent) fail("compatibility: int_0^1 |Upsilon|^2/z dz diverges");
    }
    rep.v_corner = corner_integral([&](double s) {
        const double v0 = d.tag == CaseTag::UpperStrip ? eval(bc.v_H, s) : 0.0;
        return eval(bc.V, z0 + s) - v0;
    });
    if (rep.v_corner.divergent) fail("compatibility: int_0^1 |V - v0|^2/z dz diverges");
    return rep;
}

ScalingExponents scaling_exponents(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("scaling_exponents: alpha must lie in (0, 1]");
    ScalingExponents e;
    e.ey = 1.0 / (3.0 - alpha);
    e.ez = alpha / (3.0 - alpha);
    e.ekman = 3.0 * (1.0 - alpha) / (2.0 * (3.0 - alpha)) + alpha / (3.0 - alpha);
    return e;
}

}  // namespace eqlayer
