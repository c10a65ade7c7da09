#include "helispin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <thread>

#include "helispin/analytic.hpp"
#include "helispin/detail/format.hpp"
#include "helispin/dynamics.hpp"
#include "helispin/errors.hpp"
#include "helispin/phases.hpp"

namespace helispin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        const size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& field, long line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("cannot parse number '" + field + "'", line_no);
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + field + "'", line_no);
    return value;
}

// Runs fn(i) over [0, n) on `jobs` threads. Exceptions are delivered to the
// per-index error slots by the caller's fn; fn must not throw.
void parallel_for(long n, int jobs, const std::function<void(long)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    const int nthreads = static_cast<int>(std::min<long>(jobs, n));
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

std::string flag_names(unsigned flags) {
    std::string out;
    auto add = [&](const char* name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (flags & row_flags::b_nonpositive) add("B_nonpositive");
    if (flags & row_flags::branch_ambiguous) add("branch_ambiguous");
    if (flags & row_flags::numeric_failed) add("numeric_failed");
    return out;
}

void SweepConfig::validate() const {
    base.validate();
    if (phi_grid.empty()) throw DomainError("phi grid must be nonempty");
    for (size_t i = 0; i < phi_grid.size(); ++i) {
        if (!(phi_grid[i] >= 0.0 && phi_grid[i] <= kPi))
            throw DomainError("phi grid values must lie in [0, pi]");
        if (i > 0 && !(phi_grid[i] > phi_grid[i - 1]))
            throw DomainError("phi grid must be strictly increasing");
    }
    if (steps_per_turn < 16) throw DomainError("steps_per_turn must be >= 16");
    if (jobs < 1) throw DomainError("jobs must be >= 1");
}

std::vector<double> SweepConfig::linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("grid needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<SweepRow> sweep_topological_phase(const SweepConfig& config) {
    config.validate();
    const size_t n = config.phi_grid.size();
    std::vector<SweepRow> rows(n);

    for (size_t i = 0; i < n; ++i) {
        SweepRow& row = rows[i];
        row.phi = config.phi_grid[i];
        row.solid_angle_field = solid_angle(row.phi);
        row.gamma_berry = -static_cast<double>(config.base.turns) * row.solid_angle_field;
        HelicalFieldParams p = config.base;
        p.phi = row.phi;
        row.adiabaticity_r = adiabaticity_ratio(p);
        try {
            const RotatingFrameParams frame = rotating_frame_params(p);
            row.theta = frame.theta;
            row.solid_angle_spin = solid_angle(frame.theta);
            row.gamma_nonadiabatic = -static_cast<double>(p.turns) * row.solid_angle_spin;
            if (frame.b_eff <= 0.0) row.flags |= row_flags::b_nonpositive;
        } catch (const DegenerateConfigError&) {
            row.theta = std::nan("");
            row.solid_angle_spin = std::nan("");
            row.gamma_nonadiabatic = std::nan("");
            row.flags |= row_flags::b_nonpositive;
        }
    }

    if (config.numeric_points) {
        // Raw per-row gamma: difference of the two substates' geometric
        // phases. The continuity-unwrapped totals carry the winding of the
        // eigenbasis overlap around zero, which contributes 4*pi*turns to the
        // difference when the cone opens past the equator.
        std::vector<double> raw(n, std::nan(""));
        parallel_for(static_cast<long>(n), config.jobs, [&](long i) {
            SweepRow& row = rows[i];
            if (std::isnan(row.theta)) return;
            HelicalFieldParams p = config.base;
            p.phi = row.phi;
            try {
                const PhaseExtraction up =
                    extract_phases(p, Substate::up_along_s, config.steps_per_turn);
                const PhaseExtraction down =
                    extract_phases(p, Substate::down_along_s, config.steps_per_turn);
                const double winding =
                    row.theta > 0.5 * kPi ? 2.0 * kTwoPi * static_cast<double>(p.turns) : 0.0;
                raw[i] = up.phases.geometric - down.phases.geometric - winding;
            } catch (const Error&) {
                row.flags |= row_flags::numeric_failed;
            }
        });

        // Branch resolution by continuity along the grid. The raw values are
        // exact modulo 2*pi; the first resolved row anchors to the branch of
        // its own analytic column.
        bool have_prev = false;
        double prev = 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (std::isnan(raw[i])) continue;
            const double target = have_prev ? prev : rows[i].gamma_nonadiabatic;
            const double resolved = raw[i] + kTwoPi * std::round((target - raw[i]) / kTwoPi);
            if (std::abs(resolved - target) > 0.9 * kPi)
                rows[i].flags |= row_flags::branch_ambiguous;
            rows[i].gamma_numeric = resolved;
            prev = resolved;
            have_prev = true;
        }
    }
    return rows;
}

std::vector<PolarizationRow> sweep_polarization(const SweepConfig& config, PolarizationScan scan) {
    config.validate();
    const std::vector<double>& grid =
        (scan == PolarizationScan::vary_phi) ? config.phi_grid : config.scan_values;
    if (grid.empty()) throw DomainError("scan grid must be nonempty");

    std::vector<PolarizationRow> rows(grid.size());
    parallel_for(static_cast<long>(grid.size()), config.jobs, [&](long i) {
        PolarizationRow& row = rows[i];
        row.parameter = grid[i];
        HelicalFieldParams p = config.base;
        switch (scan) {
            case PolarizationScan::vary_phi: p.phi = grid[i]; break;
            case PolarizationScan::vary_b0: p.b0 = grid[i]; break;
            case PolarizationScan::vary_v: p.velocity = grid[i]; break;
        }
        // An unusable scan value (bad parameters) fails the whole row; past
        // that, columns fail independently: the adiabatic formula never needs
        // the rotating frame, and the integrator runs even where the closed
        // form degenerates.
        try {
            row.adiabatic = polarization_adiabatic(p);
        } catch (const Error&) {
            row.exact = std::nan("");
            row.adiabatic = std::nan("");
            row.flags |= row_flags::numeric_failed;
            return;
        }
        try {
            row.exact = polarization_exact(p);
        } catch (const Error&) {
            row.exact = std::nan("");
            row.flags |= row_flags::numeric_failed;
        }
        if (config.numeric_points) {
            try {
                row.numeric = evolve(p, Spinor::spin_up(), config.steps_per_turn)
                                  .polarization_z_refined;
            } catch (const Error&) {
                row.flags |= row_flags::numeric_failed;
            }
        }
    });
    return rows;
}

std::vector<ExperimentalPoint> parse_experimental_points(std::istream& in) {
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    size_t header_fields = 0;
    std::vector<ExperimentalPoint> points;

    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> fields = split_csv(stripped);

        if (!header_seen) {
            if (fields.size() < 2 || fields.size() > 3)
                throw ParseError("header must declare 2 or 3 columns", line_no);
            const char* expected[3] = {"solid_angle_sr", "gamma_rad", "gamma_err_rad"};
            const char* base_names[3] = {"solid_angle", "gamma", "gamma_err"};
            for (size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == expected[i]) continue;
                if (fields[i].rfind(base_names[i], 0) == 0)
                    throw UnitError("column '" + fields[i] + "' declares unknown units (expected '" +
                                    expected[i] + "')");
                throw ParseError("unexpected header column '" + fields[i] + "'", line_no);
            }
            header_fields = fields.size();
            header_seen = true;
            continue;
        }

        if (fields.size() != header_fields) {
            // A trailing empty uncertainty field is allowed.
            if (!(header_fields == 3 && fields.size() == 2))
                throw ParseError("expected " + std::to_string(header_fields) + " fields, got " +
                                 std::to_string(fields.size()), line_no);
        }
        ExperimentalPoint pt;
        pt.solid_angle = parse_double(fields[0], line_no);
        pt.gamma = parse_double(fields[1], line_no);
        if (fields.size() == 3 && !fields[2].empty())
            pt.gamma_uncertainty = parse_double(fields[2], line_no);
        if (pt.solid_angle < 0.0 || pt.solid_angle > 4.0 * kPi + 1e-12)
            throw ParseError("solid angle must lie in [0, 4*pi]", line_no);
        points.push_back(pt);
    }
    if (!header_seen) throw ParseError("missing header", std::max(line_no, 1L));
    return points;
}

std::vector<ExperimentalPoint> load_experimental_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open data file: " + path.string());
    return parse_experimental_points(in);
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const auto hi = std::upper_bound(xs.begin(), xs.end(), x);
    if (hi == xs.begin()) return ys.front();  // x == xs.front() up to the caller's range check
    if (hi == xs.end()) return ys.back();
    const size_t j = static_cast<size_t>(hi - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

}  // namespace

OverlaySummary compare_overlay(std::span<const SweepRow> rows,
                               std::span<const ExperimentalPoint> points, OverlayScale scale) {
    if (rows.empty() || points.empty())
        throw DomainError("overlay requires nonempty sweep rows and data points");
    std::vector<double> xs, berry, nonad;
    xs.reserve(rows.size());
    for (const SweepRow& row : rows) {
        if (std::isnan(row.gamma_nonadiabatic)) continue;
        if (!xs.empty() && !(row.solid_angle_field > xs.back()))
            throw DomainError("sweep rows must have strictly increasing solid angle");
        xs.push_back(row.solid_angle_field);
        berry.push_back(row.gamma_berry);
        nonad.push_back(row.gamma_nonadiabatic);
    }
    if (xs.size() < 2) throw DomainError("overlay needs at least two usable sweep rows");

    std::vector<double> scales;
    if (scale == OverlayScale::full) scales = {1.0};
    else if (scale == OverlayScale::half) scales = {0.5};
    else scales = {1.0, 0.5};

    OverlaySummary summary;
    for (const double s : scales) {
        CurveResiduals res;
        res.scale = s;
        double sum_b = 0.0, sum_n = 0.0;
        for (const ExperimentalPoint& pt : points) {
            if (pt.solid_angle < xs.front() - 1e-12 || pt.solid_angle > xs.back() + 1e-12)
                throw DomainError("data point solid angle outside the sweep range");
            const double rb = pt.gamma - s * interpolate(xs, berry, pt.solid_angle);
            const double rn = pt.gamma - s * interpolate(xs, nonad, pt.solid_angle);
            res.berry_residuals.push_back(rb);
            res.nonadiabatic_residuals.push_back(rn);
            sum_b += rb * rb;
            sum_n += rn * rn;
        }
        res.rms_berry = std::sqrt(sum_b / static_cast<double>(points.size()));
        res.rms_nonadiabatic = std::sqrt(sum_n / static_cast<double>(points.size()));
        summary.by_scale.push_back(std::move(res));
    }
    return summary;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out =
        "phi_rad,omega_field_sr,theta_rad,omega_spin_sr,gamma_berry_rad,"
        "gamma_nonadiabatic_rad,gamma_numeric_rad,adiabaticity_r,flags\n";
    for (const SweepRow& row : rows) {
        out += detail::format17(row.phi);
        out += ',';
        out += detail::format17(row.solid_angle_field);
        out += ',';
        out += detail::format17(row.theta);
        out += ',';
        out += detail::format17(row.solid_angle_spin);
        out += ',';
        out += detail::format17(row.gamma_berry);
        out += ',';
        out += detail::format17(row.gamma_nonadiabatic);
        out += ',';
        if (row.gamma_numeric) out += detail::format17(*row.gamma_numeric);
        out += ',';
        out += detail::format17(row.adiabaticity_r);
        out += ',';
        out += flag_names(row.flags);
        out += '\n';
    }
    return out;
}

std::string polarization_csv(std::span<const PolarizationRow> rows) {
    std::string out = "parameter,P_z_exact,P_z_adiabatic,P_z_numeric\n";
    for (const PolarizationRow& row : rows) {
        out += detail::format17(row.parameter);
        out += ',';
        out += detail::format17(row.exact);
        out += ',';
        out += detail::format17(row.adiabatic);
        out += ',';
        if (row.numeric) out += detail::format17(*row.numeric);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path.string());
    out << content;
    if (!out) throw DomainError("failed writing output file: " + path.string());
}

}  // namespace helispin
