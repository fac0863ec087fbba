#include "isd/physics.hpp"

#include <cmath>
#include <string>

#include "isd/errors.hpp"

namespace isd {

namespace {

void require_pressure(double pressure) {
    if (!(pressure >= 0.0) || !std::isfinite(pressure)) {
        throw DomainError("pressure must be finite and non-negative, got " +
                          std::to_string(pressure));
    }
}

// Compressed dielectric thickness d - beta*P; must stay positive.
double compressed_thickness(const StaticParams& p, double pressure) {
    require_pressure(pressure);
    const double d = p.geometry.thickness - p.beta * pressure;
    if (!(d > 0.0)) {
        throw DomainError("dielectric fully compressed: beta*P >= d at P = " +
                          std::to_string(pressure) + " Pa");
    }
    return d;
}

double expanded_area(const StaticParams& p, double pressure) {
    return p.geometry.area0 + p.alpha * pressure;
}

}  // namespace

void Geometry::validate() const {
    if (!(area0 > 0.0)) throw ConfigError("geometry: area must be > 0");
    if (!(thickness > 0.0)) throw ConfigError("geometry: thickness must be > 0");
    if (!(gap >= 0.0)) throw ConfigError("geometry: gap must be >= 0");
    if (!(eps_r >= 1.0)) throw ConfigError("geometry: eps_r must be >= 1");
}

void StaticParams::validate() const {
    geometry.validate();
    if (!std::isfinite(charge)) throw ConfigError("static: charge must be finite");
    if (!(alpha >= 0.0)) throw ConfigError("static: alpha must be >= 0");
    if (!(beta >= 0.0)) throw ConfigError("static: beta must be >= 0");
}

void DynamicParams::validate() const {
    geometry.validate();
    if (!(sigma0 >= 0.0)) throw ConfigError("dynamic: sigma0 must be >= 0");
    if (!(density_rate > 0.0)) throw ConfigError("dynamic: m must be > 0");
    if (!(v_max >= 0.0)) throw ConfigError("dynamic: v_max must be >= 0");
    if (!(k > 0.0)) throw ConfigError("dynamic: k must be > 0");
}

double static_capacitance(const StaticParams& p, double pressure) {
    const double d = compressed_thickness(p, pressure);
    return kVacuumPermittivity * p.geometry.eps_r * expanded_area(p, pressure) / d;
}

double static_voltage(const StaticParams& p, double pressure) {
    const double d = compressed_thickness(p, pressure);
    return p.charge * d / (kVacuumPermittivity * p.geometry.eps_r * expanded_area(p, pressure));
}

double static_sensitivity(const StaticParams& p, double pressure) {
    const double d = compressed_thickness(p, pressure);
    const double a = expanded_area(p, pressure);
    const double scale = p.charge / (kVacuumPermittivity * p.geometry.eps_r);
    return scale * (-p.beta * a - p.alpha * d) / (a * a);
}

double charge_density(const DynamicParams& p, double pressure) {
    require_pressure(pressure);
    return -p.sigma0 * std::expm1(-p.density_rate * pressure);
}

double effective_permittivity(const Geometry& g, PermittivityMode mode) {
    const double total = g.gap + g.thickness;
    const double dielectric_fraction = g.thickness / total;
    const double air_fraction =
        mode == PermittivityMode::Corrected ? g.gap / total : dielectric_fraction;
    return 1.0 / (dielectric_fraction / g.eps_r + air_fraction);
}

double cycle_charge(const DynamicParams& p, double contact_area, double pressure) {
    return charge_density(p, pressure) * contact_area;
}

double min_capacitance(const Geometry& g, double contact_area, PermittivityMode mode) {
    return kVacuumPermittivity * effective_permittivity(g, mode) * contact_area /
           (g.gap + g.thickness);
}

double dynamic_peak_voltage(const DynamicParams& p, double pressure, PermittivityMode mode) {
    const Geometry& g = p.geometry;
    return charge_density(p, pressure) * (g.gap + g.thickness) /
           (kVacuumPermittivity * effective_permittivity(g, mode));
}

double dynamic_voltage(const DynamicParams& p, double pressure) {
    require_pressure(pressure);
    return -p.v_max * std::expm1(-p.k * pressure);
}

double dynamic_sensitivity(const DynamicParams& p, double pressure) {
    require_pressure(pressure);
    return p.v_max * p.k * std::exp(-p.k * pressure);
}

}  // namespace isd
