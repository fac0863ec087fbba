#pragma once

// Closed-form electrostatic models of the static (contact, DC-like) and
// dynamic (contact-separation, AC) sensing modes. All quantities are SI:
// pressure in Pa, area in m^2, lengths in m, charge in C, voltage in V.

namespace isd {

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kDefaultRelativePermittivity = 2.0;

struct Geometry {
    double area0 = 1.6e-3;      // initial contact area (4 cm x 4 cm electrode)
    double thickness = 5e-4;    // ePTFE dielectric thickness
    double gap = 1e-3;          // preset separation gap
    double eps_r = kDefaultRelativePermittivity;

    void validate() const;
};

struct StaticParams {
    double charge = 1e-9;       // transferred charge Q, either sign
    double alpha = 0.0;         // area expansion, m^2/Pa
    double beta = 0.0;          // thickness compression, m/Pa
    Geometry geometry;

    void validate() const;
};

struct DynamicParams {
    double sigma0 = 1e-5;       // maximum surface charge density, C/m^2
    double density_rate = 5e-4; // charge-density saturation constant m, 1/Pa
    double v_max = 163.6;       // saturation voltage of the empirical law
    double k = 4.2e-4;          // empirical sensitivity constant, 1/Pa
    Geometry geometry;

    void validate() const;
};

// Series-stack permittivity. RepeatedRatio uses d/(x+d) in both terms;
// Corrected weights the air term by x/(x+d).
enum class PermittivityMode { Corrected, RepeatedRatio };

// Static mode. All three throw DomainError when beta*P >= d or P < 0.
double static_capacitance(const StaticParams& p, double pressure);
double static_voltage(const StaticParams& p, double pressure);
// Signed dV/dP; negative whenever alpha or beta is positive and Q > 0.
double static_sensitivity(const StaticParams& p, double pressure);

// Dynamic mode.
double charge_density(const DynamicParams& p, double pressure);
double effective_permittivity(const Geometry& g,
                              PermittivityMode mode = PermittivityMode::Corrected);
double cycle_charge(const DynamicParams& p, double contact_area, double pressure);
double min_capacitance(const Geometry& g, double contact_area,
                       PermittivityMode mode = PermittivityMode::Corrected);
// sigma(P) (x + d) / (eps0 eps_eff); independent of contact area.
double dynamic_peak_voltage(const DynamicParams& p, double pressure,
                            PermittivityMode mode = PermittivityMode::Corrected);
// Empirical saturation law V_max (1 - exp(-kP)) and its derivative.
double dynamic_voltage(const DynamicParams& p, double pressure);
double dynamic_sensitivity(const DynamicParams& p, double pressure);

}  // namespace isd
