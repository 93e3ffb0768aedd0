#include "causal/phenomena.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace causal {

DataTable generate_ohm_dataset(size_t n, const OhmRanges& ranges, const OhmConstants& constants,
                               Rng& rng) {
    if (n < 1) throw std::invalid_argument("generate_ohm_dataset: n must be >= 1");
    auto check_range = [](double lo, double hi, const char* what, bool require_positive) {
        if (!(lo < hi)) throw std::invalid_argument(std::string("generate_ohm_dataset: empty ") + what +
                                                    " range");
        if (require_positive && lo <= 0.0) {
            throw std::invalid_argument(std::string("generate_ohm_dataset: ") + what +
                                        " range must be positive");
        }
    };
    check_range(ranges.v_min, ranges.v_max, "V", true);
    check_range(ranges.l_min, ranges.l_max, "L", true);
    check_range(ranges.a_min, ranges.a_max, "A", true);
    check_range(ranges.dt_min, ranges.dt_max, "T", false);

    std::vector<double> v(n), l(n), a(n), t(n), rho(n), r(n), i(n);
    for (size_t k = 0; k < n; ++k) {
        v[k] = rng.uniform(ranges.v_min, ranges.v_max);
        l[k] = rng.uniform(ranges.l_min, ranges.l_max);
        a[k] = rng.uniform(ranges.a_min, ranges.a_max);
        t[k] = rng.uniform(ranges.dt_min, ranges.dt_max);
        rho[k] = constants.rho0 * (1.0 + constants.alpha * t[k]);
        if (rho[k] <= 0.0) {
            throw std::invalid_argument(
                "generate_ohm_dataset: temperature range drives resistivity nonpositive");
        }
        r[k] = rho[k] * l[k] / a[k];
        i[k] = v[k] / r[k];
    }

    DataTable out;
    out.add_column("V", std::move(v));
    out.add_column("L", std::move(l));
    out.add_column("A", std::move(a));
    out.add_column("T", std::move(t));
    out.add_column("rho", std::move(rho));
    out.add_column("R", std::move(r));
    out.add_column("I", std::move(i));
    return out;
}

namespace {

std::map<int, double> by_day(const DataTable& t, const std::string& value_col,
                             const std::string& origin) {
    const auto& doy = t.column("doy");
    const auto& val = t.column(value_col);
    std::map<int, double> out;
    for (size_t i = 0; i < doy.size(); ++i) {
        const double d = doy[i];
        const int day = static_cast<int>(std::llround(d));
        if (std::abs(d - day) > 1e-9 || day < 1 || day > 366) {
            throw std::runtime_error(origin + ": day of year " + std::to_string(d) +
                                     " out of range [1, 366]");
        }
        if (!out.emplace(day, val[i]).second) {
            throw std::runtime_error(origin + ": duplicate day " + std::to_string(day));
        }
    }
    return out;
}

}  // namespace

TideLoadResult load_tide_dataset(const std::string& es_csv, const std::string& em_csv,
                                 const std::string& tide_csv) {
    const DataTable es = DataTable::read_csv_file(es_csv);
    const DataTable em = DataTable::read_csv_file(em_csv);
    const DataTable tide = DataTable::read_csv_file(tide_csv);

    if (!es.has_column("doy") || !es.has_column("d_es_au")) {
        throw std::runtime_error(es_csv + ": expected header doy,d_es_au");
    }
    if (!em.has_column("doy")) throw std::runtime_error(em_csv + ": expected a doy column");
    double em_scale = 0.0;
    std::string em_col;
    if (em.has_column("d_em_km")) {
        em_col = "d_em_km";
        em_scale = 1.0 / kKmPerAu;
    } else if (em.has_column("d_em_au")) {
        em_col = "d_em_au";
        em_scale = 1.0;
    } else {
        throw std::runtime_error(em_csv + ": expected d_em_km or d_em_au column (unit mismatch?)");
    }
    if (!tide.has_column("doy") || !tide.has_column("h_ft")) {
        throw std::runtime_error(tide_csv + ": expected header doy,h_ft");
    }

    const auto es_map = by_day(es, "d_es_au", es_csv);
    const auto em_map = by_day(em, em_col, em_csv);
    const auto tide_map = by_day(tide, "h_ft", tide_csv);
    for (const auto& [day, value] : es_map) {
        if (value <= 0.0) throw std::runtime_error(es_csv + ": nonpositive distance on day " +
                                                   std::to_string(day));
    }
    for (const auto& [day, value] : em_map) {
        if (value <= 0.0) throw std::runtime_error(em_csv + ": nonpositive distance on day " +
                                                   std::to_string(day));
    }

    TideLoadResult out;
    std::vector<double> es_col, em_col_v, h_col;
    for (const auto& [day, es_val] : es_map) {
        const auto em_it = em_map.find(day);
        const auto tide_it = tide_map.find(day);
        if (em_it == em_map.end() || tide_it == tide_map.end()) {
            out.warnings.push_back("day " + std::to_string(day) +
                                   " missing from " + (em_it == em_map.end() ? em_csv : tide_csv) +
                                   ", row dropped");
            continue;
        }
        es_col.push_back(es_val);
        em_col_v.push_back(em_it->second * em_scale);
        h_col.push_back(tide_it->second);
    }
    for (const auto& [day, value] : em_map) {
        (void)value;
        if (!es_map.count(day)) {
            out.warnings.push_back("day " + std::to_string(day) + " missing from " + es_csv +
                                   ", row dropped");
        }
    }
    if (es_col.empty()) throw std::runtime_error("tide join produced no rows");

    out.table.add_column("ESd", std::move(es_col));
    out.table.add_column("EMd", std::move(em_col_v));
    out.table.add_column("h", std::move(h_col));
    return out;
}

TideFixture generate_tide_fixture(size_t days, Rng& rng) {
    if (days < 30 || days > 366) {
        throw std::invalid_argument("generate_tide_fixture: days must be in [30, 366]");
    }

    // Annual Earth-Sun cycle (perihelion near day 4) and anomalistic
    // Earth-Moon cycle. The lunar phase is chosen so the two series come
    // out slightly negatively correlated over the year, which keeps the
    // Sun-distance regression slope negative the way the real ephemerides
    // do.
    constexpr double kEsMeanAu = 1.0;
    constexpr double kEsAmpAu = 0.01671;
    constexpr double kEmMeanKm = 384748.0;
    constexpr double kEmAmpKm = 21615.0;
    constexpr double kAnomalisticMonth = 27.55455;
    constexpr double kLunarPhase = 0.8;

    constexpr double kMoonTerm = 25.0;   // feet at mean distance
    constexpr double kSunTerm = 0.025;   // feet at mean distance; a/b = 1000
    constexpr double kNoiseSd = 0.002;   // feet

    std::vector<double> doy(days), es(days), em(days), h(days);
    for (size_t i = 0; i < days; ++i) {
        const double day = static_cast<double>(i + 1);
        doy[i] = day;
        es[i] = kEsMeanAu - kEsAmpAu * std::cos(2.0 * std::numbers::pi * (day - 4.0) / 365.25);
        em[i] = kEmMeanKm +
                kEmAmpKm * std::cos(2.0 * std::numbers::pi * day / kAnomalisticMonth + kLunarPhase);
        const double r_em = em[i] / kEmMeanKm;
        const double r_es = es[i] / kEsMeanAu;
        h[i] = kMoonTerm / (r_em * r_em * r_em) + kSunTerm / (r_es * r_es * r_es) +
               kNoiseSd * rng.normal();
    }

    TideFixture out;
    out.earth_sun.add_column("doy", doy);
    out.earth_sun.add_column("d_es_au", std::move(es));
    out.earth_moon.add_column("doy", doy);
    out.earth_moon.add_column("d_em_km", std::move(em));
    out.tide.add_column("doy", doy);
    out.tide.add_column("h_ft", std::move(h));
    return out;
}

DataTable load_ldr_dataset(const std::string& csv_path) {
    const DataTable t = DataTable::read_csv_file(csv_path);
    for (const char* col : {"V", "I", "P", "R"}) {
        if (!t.has_column(col)) {
            throw std::runtime_error(csv_path + ": expected header V,I,P,R (missing " + col + ")");
        }
    }
    for (double r : t.column("R")) {
        if (r <= 0.0) throw std::runtime_error(csv_path + ": nonpositive resistance");
    }
    return t;
}

}  // namespace causal
