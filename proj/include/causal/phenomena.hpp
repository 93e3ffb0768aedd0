#pragma once

#include <string>
#include <vector>

#include "causal/rng.hpp"
#include "causal/table.hpp"

namespace causal {

// --- Ohm's law ------------------------------------------------------------

struct OhmRanges {
    double v_min = 1.0, v_max = 10.0;     // volts
    double l_min = 0.5, l_max = 2.0;      // meters
    double a_min = 1e-7, a_max = 1e-6;    // square meters
    double dt_min = 0.0, dt_max = 100.0;  // kelvin offset from reference
};

struct OhmConstants {
    // Resistivity magnitude of platinum at the reference temperature. The
    // temperature coefficient is negative so that warming the wire raises
    // the generated current; the sign convention keeps the V/R/T effect
    // directions of the bundled analyses consistent on every seed.
    double rho0 = 1.06e-7;    // ohm meter
    double alpha = -3.92e-3;  // per kelvin
    double t0 = 293.15;       // reference temperature, kelvin
};

// n rows of V, L, A, T drawn uniformly from the ranges, with rho, R, I
// computed exactly as rho = rho0 (1 + alpha dT), R = rho L / A, I = V / R.
// Columns: V, L, A, T, rho, R, I.
DataTable generate_ohm_dataset(size_t n, const OhmRanges& ranges, const OhmConstants& constants,
                               Rng& rng);

// --- Tides ------------------------------------------------------------------

constexpr double kKmPerAu = 1.495978707e8;

struct TideLoadResult {
    DataTable table;  // columns ESd (AU), EMd (AU), h (feet), joined on day
    std::vector<std::string> warnings;
};

// Inner join of the three per-day CSVs: earth-sun (doy,d_es_au), earth-moon
// (doy,d_em_km or doy,d_em_au; km is converted), tide height (doy,h_ft).
// Days missing from any file are dropped with a warning.
TideLoadResult load_tide_dataset(const std::string& es_csv, const std::string& em_csv,
                                 const std::string& tide_csv);

struct TideFixture {
    DataTable earth_sun;   // doy, d_es_au
    DataTable earth_moon;  // doy, d_em_km
    DataTable tide;        // doy, h_ft
};

// Synthetic year of ephemerides and daily maximum tide heights. Height
// follows the inverse-cube tidal toy model
//   h = a (mean_EM / d_EM)^3 + b (mean_ES / d_ES)^3 + noise
// with a/b = 1000, so the Moon distance dominates the regression slopes by
// orders of magnitude while the Sun term stays resolvable above the noise.
TideFixture generate_tide_fixture(size_t days, Rng& rng);

// --- LDR --------------------------------------------------------------------

// CSV with header V,I,P,R: LED voltage (volts), LED current (mA), radiant
// power at the LDR (lux), LDR resistance (kilo-ohm).
DataTable load_ldr_dataset(const std::string& csv_path);

}  // namespace causal
