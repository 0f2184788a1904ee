#include "piezotx/pump.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "piezotx/constants.hpp"
#include "piezotx/errors.hpp"

namespace piezotx {

void validate(const DiodeModel& dm) {
    if (const auto* e = std::get_if<ExponentialDiode>(&dm)) {
        if (e->Is <= 0.0 || e->n <= 0.0 || e->VT <= 0.0)
            throw std::invalid_argument("exponential diode: Is, n, VT must be > 0");
    } else {
        const auto& s = std::get<IdealSwitchDiode>(dm);
        if (s.Ron <= 0.0 || s.Goff < 0.0 || s.Vdrop < 0.0)
            throw std::invalid_argument(
                "ideal switch diode: Ron > 0, Goff >= 0, Vdrop >= 0 required");
    }
}

DiodeEval diode_current(const DiodeModel& dm, double v) {
    if (const auto* e = std::get_if<ExponentialDiode>(&dm)) {
        const double nvt = e->n * e->VT;
        const double u = v / nvt;
        constexpr double kClamp = 80.0;
        if (u <= kClamp) {
            const double ex = std::exp(u);
            return {e->Is * (ex - 1.0), e->Is * ex / nvt};
        }
        // Linear extrapolation beyond the clamp keeps Newton finite.
        const double ex = std::exp(kClamp);
        const double g = e->Is * ex / nvt;
        const double i_at = e->Is * (ex - 1.0);
        return {i_at + g * (v - kClamp * nvt), g};
    }
    const auto& s = std::get<IdealSwitchDiode>(dm);
    if (v > s.Vdrop) return {(v - s.Vdrop) / s.Ron, 1.0 / s.Ron};
    return {s.Goff * v, s.Goff};
}

void validate_circuit(const Circuit& c) {
    if (c.node_count < 2)
        throw std::invalid_argument("circuit needs at least one non-ground node");
    auto check_node = [&](int n, const char* what) {
        if (n < 0 || n >= c.node_count)
            throw std::invalid_argument(std::string(what) + ": node out of range");
    };
    for (const auto& e : c.capacitors) {
        check_node(e.np, "capacitor");
        check_node(e.nn, "capacitor");
        if (e.farad <= 0.0) throw std::invalid_argument("capacitance must be > 0");
    }
    for (const auto& e : c.resistors) {
        check_node(e.np, "resistor");
        check_node(e.nn, "resistor");
        if (e.ohm <= 0.0) throw std::invalid_argument("resistance must be > 0");
    }
    for (const auto& e : c.diodes) {
        check_node(e.anode, "diode");
        check_node(e.cathode, "diode");
        validate(e.model);
    }
    check_node(c.source_node, "source");
    check_node(c.output_node, "output");
    if (c.source.rs <= 0.0)
        throw std::invalid_argument("source series resistance must be > 0");
    if (c.source.frequency <= 0.0)
        throw std::invalid_argument("source frequency must be > 0");

    // Reachability from ground over the element graph (the source's series
    // resistance ties the source node to ground).
    std::vector<std::vector<int>> adj(c.node_count);
    auto link = [&](int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (const auto& e : c.capacitors) link(e.np, e.nn);
    for (const auto& e : c.resistors) link(e.np, e.nn);
    for (const auto& e : c.diodes) link(e.anode, e.cathode);
    link(0, c.source_node);
    std::vector<char> seen(c.node_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int n = stack.back();
        stack.pop_back();
        for (int m : adj[n])
            if (!seen[m]) {
                seen[m] = 1;
                stack.push_back(m);
            }
    }
    for (int n = 0; n < c.node_count; ++n)
        if (!seen[n])
            throw std::invalid_argument("node " + std::to_string(n) +
                                        " unreachable from ground");
}

Circuit build_ladder(int levels, double c_stage, double c_load,
                     std::optional<double> r_load, const DiodeModel& dm,
                     const SineSource& source) {
    if (levels < 1) throw std::invalid_argument("ladder needs at least one level");
    if (c_stage <= 0.0 || c_load <= 0.0)
        throw std::invalid_argument("ladder capacitances must be > 0");
    if (r_load && *r_load <= 0.0)
        throw std::invalid_argument("load resistance must be > 0");
    validate(dm);

    Circuit c;
    const int n = levels;
    c.node_count = 2 * n + 2;
    c.source = source;
    c.source_node = 1;
    // Interleaved ordering (S, ac_1, dc_1, ac_2, dc_2, ...) keeps the nodal
    // matrix pentadiagonal.
    auto ac = [](int k) { return 2 * k; };      // k = 1..n
    auto dc = [](int k) { return 2 * k + 1; };  // k = 1..n
    c.output_node = dc(n);

    c.node_names.assign(c.node_count, "");
    c.node_names[0] = "gnd";
    c.node_names[1] = "src";
    for (int k = 1; k <= n; ++k) {
        c.node_names[ac(k)] = "ac" + std::to_string(k);
        c.node_names[dc(k)] = "dc" + std::to_string(k);
    }

    c.capacitors.push_back({1, ac(1), c_stage});
    for (int k = 1; k < n; ++k) c.capacitors.push_back({ac(k), ac(k + 1), c_stage});
    c.capacitors.push_back({0, dc(1), c_stage});
    for (int k = 1; k < n; ++k) c.capacitors.push_back({dc(k), dc(k + 1), c_stage});
    c.capacitors.push_back({c.output_node, 0, c_load});

    for (int k = 1; k <= n; ++k) {
        const int below = (k == 1) ? 0 : dc(k - 1);
        c.diodes.push_back({below, ac(k), dm});
        c.diodes.push_back({ac(k), dc(k), dm});
    }

    if (r_load) c.resistors.push_back({c.output_node, 0, *r_load});

    validate_circuit(c);
    return c;
}

double ideal_cw_voltage(int levels, double vpeak, double vdrop) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    return 2.0 * levels * (vpeak - vdrop);
}

namespace {

// Banded column-major storage, no pivoting. MNA conductance matrices here
// are weakly diagonally dominant M-matrices, with every diagonal backed by
// a capacitor companion conductance.
class BandedMatrix {
public:
    BandedMatrix(int n, int bw) : n_(n), bw_(bw), ld_(2 * bw + 1), a_(ld_ * n) {}

    void set_zero() { std::fill(a_.begin(), a_.end(), 0.0); }

    double& at(int i, int j) { return a_[(i - j + bw_) + j * ld_]; }

    void copy_from(const BandedMatrix& o) { a_ = o.a_; }

    // In-place LU, then forward/back substitution on rhs.
    void factor_solve(std::vector<double>& rhs) {
        for (int j = 0; j < n_; ++j) {
            const double piv = at(j, j);
            if (std::abs(piv) < 1e-300)
                throw NumericalError("singular nodal matrix");
            const int iend = std::min(n_ - 1, j + bw_);
            for (int i = j + 1; i <= iend; ++i) {
                const double l = at(i, j) / piv;
                at(i, j) = l;
                const int kend = std::min(n_ - 1, j + bw_);
                for (int k = j + 1; k <= kend; ++k) at(i, k) -= l * at(j, k);
            }
        }
        for (int j = 0; j < n_; ++j) {
            const double x = rhs[j];
            const int iend = std::min(n_ - 1, j + bw_);
            for (int i = j + 1; i <= iend; ++i) rhs[i] -= at(i, j) * x;
        }
        for (int j = n_ - 1; j >= 0; --j) {
            double x = rhs[j];
            const int kend = std::min(n_ - 1, j + bw_);
            for (int k = j + 1; k <= kend; ++k) x -= at(j, k) * rhs[k];
            rhs[j] = x / at(j, j);
        }
    }

private:
    int n_;
    int bw_;
    int ld_;
    std::vector<double> a_;
};

struct CapState {
    double v_prev = 0.0;
    double i_prev = 0.0;
};

class Stepper {
public:
    Stepper(const Circuit& c, double dt)
        : c_(c), n_(c.node_count - 1), bw_(bandwidth(c)), dt_(dt),
          lin_(n_, bw_), work_(n_, bw_), cap_state_(c.capacitors.size()),
          geq_(c.capacitors.size()), rhs_lin_(n_), rhs_(n_), v_(n_, 0.0),
          v_try_(n_) {
        assemble_linear();
    }

    const std::vector<double>& state() const { return v_; }
    void set_state(const std::vector<double>& v, const std::vector<CapState>& cs) {
        v_ = v;
        cap_state_ = cs;
    }
    const std::vector<CapState>& cap_state() const { return cap_state_; }

    double emf(double t) const {
        return c_.source.amplitude * std::sin(2.0 * kPi * c_.source.frequency * t);
    }

    double source_current(double t) const {
        return (emf(t) - v_at(c_.source_node)) / c_.source.rs;
    }

    double v_at(int node) const { return node == 0 ? 0.0 : v_[node - 1]; }

    // Advances the state from t to t + dt, halving the step on Newton
    // failure (up to 4 levels). Throws NumericalError when even the
    // smallest sub-step fails.
    void advance(double t, double dt, int depth = 0) {
        if (try_step(t + dt)) return;
        if (depth >= 4)
            throw NumericalError("transient: Newton failed near t = " +
                                 std::to_string(t + dt) + " s");
        // Sub-steps need companion conductances for dt/2.
        const double half = 0.5 * dt;
        set_dt(half);
        advance(t, half, depth + 1);
        advance(t + half, half, depth + 1);
        set_dt(dt);
    }

    void set_dt(double dt) {
        if (dt == dt_) return;
        dt_ = dt;
        assemble_linear();
    }

    double dt() const { return dt_; }

    // Instantaneous branch powers at the current state/time.
    void powers(double t, double& p_src, double& p_rs, double& p_dio,
                double& p_res) const {
        const double i = source_current(t);
        p_src = emf(t) * i;
        p_rs = i * i * c_.source.rs;
        p_dio = 0.0;
        for (const auto& d : c_.diodes) {
            const double vd = v_at(d.anode) - v_at(d.cathode);
            p_dio += diode_current(d.model, vd).current * vd;
        }
        p_res = 0.0;
        for (const auto& r : c_.resistors) {
            const double vr = v_at(r.np) - v_at(r.nn);
            p_res += vr * vr / r.ohm;
        }
    }

    double stored_energy() const {
        double e = 0.0;
        for (std::size_t i = 0; i < c_.capacitors.size(); ++i) {
            const auto& cap = c_.capacitors[i];
            const double vc = v_at(cap.np) - v_at(cap.nn);
            e += 0.5 * cap.farad * vc * vc;
        }
        return e;
    }

private:
    static int bandwidth(const Circuit& c) {
        int bw = 0;
        auto upd = [&](int a, int b) {
            if (a > 0 && b > 0) bw = std::max(bw, std::abs(a - b));
        };
        for (const auto& e : c.capacitors) upd(e.np, e.nn);
        for (const auto& e : c.resistors) upd(e.np, e.nn);
        for (const auto& e : c.diodes) upd(e.anode, e.cathode);
        return bw;
    }

    void stamp(BandedMatrix& m, int a, int b, double g) const {
        if (a > 0) m.at(a - 1, a - 1) += g;
        if (b > 0) m.at(b - 1, b - 1) += g;
        if (a > 0 && b > 0) {
            m.at(a - 1, b - 1) -= g;
            m.at(b - 1, a - 1) -= g;
        }
    }

    void assemble_linear() {
        lin_.set_zero();
        for (std::size_t i = 0; i < c_.capacitors.size(); ++i) {
            geq_[i] = 2.0 * c_.capacitors[i].farad / dt_;
            stamp(lin_, c_.capacitors[i].np, c_.capacitors[i].nn, geq_[i]);
        }
        for (const auto& r : c_.resistors) stamp(lin_, r.np, r.nn, 1.0 / r.ohm);
        stamp(lin_, c_.source_node, 0, 1.0 / c_.source.rs);
    }

    // One trapezoidal step targeting time t_new. Returns false when Newton
    // does not converge; the state is left untouched in that case.
    bool try_step(double t_new) {
        std::fill(rhs_lin_.begin(), rhs_lin_.end(), 0.0);
        rhs_lin_[c_.source_node - 1] += emf(t_new) / c_.source.rs;
        for (std::size_t i = 0; i < c_.capacitors.size(); ++i) {
            const double ieq = geq_[i] * cap_state_[i].v_prev + cap_state_[i].i_prev;
            const auto& cap = c_.capacitors[i];
            if (cap.np > 0) rhs_lin_[cap.np - 1] += ieq;
            if (cap.nn > 0) rhs_lin_[cap.nn - 1] -= ieq;
        }

        v_try_ = v_;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            work_.copy_from(lin_);
            rhs_ = rhs_lin_;
            for (const auto& d : c_.diodes) {
                const double va = d.anode == 0 ? 0.0 : v_try_[d.anode - 1];
                const double vc = d.cathode == 0 ? 0.0 : v_try_[d.cathode - 1];
                const double vd = va - vc;
                const DiodeEval de = diode_current(d.model, vd);
                stamp(work_, d.anode, d.cathode, de.conductance);
                const double isrc = de.current - de.conductance * vd;
                if (d.anode > 0) rhs_[d.anode - 1] -= isrc;
                if (d.cathode > 0) rhs_[d.cathode - 1] += isrc;
            }
            work_.factor_solve(rhs_);

            double max_dv = 0.0;
            double max_v = 0.0;
            // Damped update after 20 iterations settles switch chattering.
            const double relax = it < 20 ? 1.0 : 0.5;
            for (int i = 0; i < n_; ++i) {
                const double nv = v_try_[i] + relax * (rhs_[i] - v_try_[i]);
                max_dv = std::max(max_dv, std::abs(nv - v_try_[i]));
                v_try_[i] = nv;
                max_v = std::max(max_v, std::abs(nv));
            }
            if (max_dv <= 1e-6 && max_dv <= 1e-6 * std::max(max_v, 1e-6)) {
                converged = true;
                break;
            }
        }
        if (!converged) return false;

        v_ = v_try_;
        for (std::size_t i = 0; i < c_.capacitors.size(); ++i) {
            const auto& cap = c_.capacitors[i];
            const double vc = v_at(cap.np) - v_at(cap.nn);
            const double ieq = geq_[i] * cap_state_[i].v_prev + cap_state_[i].i_prev;
            cap_state_[i].i_prev = geq_[i] * vc - ieq;
            cap_state_[i].v_prev = vc;
        }
        return true;
    }

    const Circuit& c_;
    int n_;
    int bw_;
    double dt_;
    BandedMatrix lin_;
    BandedMatrix work_;
    std::vector<CapState> cap_state_;
    std::vector<double> geq_;
    std::vector<double> rhs_lin_;
    std::vector<double> rhs_;
    std::vector<double> v_;
    std::vector<double> v_try_;
};

}  // namespace

Waveforms transient(const Circuit& c, const TransientOptions& opts) {
    validate_circuit(c);
    const double f = c.source.frequency;
    double dt = opts.dt > 0.0 ? opts.dt : 1.0 / (500.0 * f);
    if (dt > 1.0 / (200.0 * f))
        std::cerr << "[piezotx] warning: dt = " << dt
                  << " s is coarser than 1/(200 f_source)\n";

    const long spp = std::lround(1.0 / (f * dt));
    if (spp < 4) throw std::invalid_argument("transient: dt too coarse, < 4 steps per period");

    std::size_t max_steps;
    if (opts.t_end) {
        if (*opts.t_end <= 0.0)
            throw std::invalid_argument("transient: t_end must be > 0");
        max_steps = static_cast<std::size_t>(std::ceil(*opts.t_end / dt - 1e-9));
    } else {
        max_steps = opts.max_steps;
    }

    Stepper stepper(c, dt);

    Waveforms w;
    w.dt = dt;
    w.f_source = f;
    w.time.reserve(max_steps + 1);
    w.v_out.reserve(max_steps + 1);
    w.v_src.reserve(max_steps + 1);
    w.i_src.reserve(max_steps + 1);
    if (opts.store_all_nodes) w.nodes.reserve(max_steps + 1);

    w.energy.cap_initial = stepper.stored_energy();

    double p_src = 0.0, p_rs = 0.0, p_dio = 0.0, p_res = 0.0;
    stepper.powers(0.0, p_src, p_rs, p_dio, p_res);

    auto record = [&](double t) {
        w.time.push_back(t);
        w.v_out.push_back(stepper.v_at(c.output_node));
        w.v_src.push_back(stepper.v_at(c.source_node));
        w.i_src.push_back(stepper.source_current(t));
        if (opts.store_all_nodes) w.nodes.push_back(stepper.state());
    };
    record(0.0);

    double period_acc = 0.0;
    double prev_mean = 0.0;
    bool have_prev_mean = false;
    int consec = 0;

    for (std::size_t step = 1; step <= max_steps; ++step) {
        const double t_prev = (step - 1) * dt;
        const double t = step * dt;
        stepper.advance(t_prev, dt);
        record(t);

        double q_src, q_rs, q_dio, q_res;
        stepper.powers(t, q_src, q_rs, q_dio, q_res);
        w.energy.source += 0.5 * dt * (p_src + q_src);
        w.energy.rs += 0.5 * dt * (p_rs + q_rs);
        w.energy.diodes += 0.5 * dt * (p_dio + q_dio);
        w.energy.resistors += 0.5 * dt * (p_res + q_res);
        p_src = q_src;
        p_rs = q_rs;
        p_dio = q_dio;
        p_res = q_res;

        if (!opts.t_end) {
            period_acc += stepper.v_at(c.output_node);
            if (step % static_cast<std::size_t>(spp) == 0) {
                const double mean = period_acc / static_cast<double>(spp);
                period_acc = 0.0;
                if (have_prev_mean) {
                    const double rel =
                        std::abs(mean - prev_mean) /
                        std::max({std::abs(mean), std::abs(prev_mean), 1e-30});
                    consec = rel < opts.steady_tol ? consec + 1 : 0;
                }
                prev_mean = mean;
                have_prev_mean = true;
                if (consec >= opts.steady_periods) {
                    w.reached_steady = true;
                    break;
                }
            }
        }
    }

    w.energy.cap_final = stepper.stored_energy();
    w.final_state = stepper.state();
    return w;
}

PumpMetrics steady_state_metrics(const Waveforms& w, double f_source) {
    if (f_source <= 0.0) throw std::invalid_argument("f_source must be > 0");
    if (w.time.size() < 2 || w.dt <= 0.0)
        throw std::invalid_argument("waveforms are empty");
    const long spp = std::lround(1.0 / (f_source * w.dt));
    if (spp < 2) throw std::invalid_argument("waveforms: dt too coarse for f_source");
    const std::size_t n = w.time.size();
    if (static_cast<long>(n - 1) < 10 * spp)
        throw std::invalid_argument(
            "steady_state_metrics: waveforms must span at least 10 periods");

    const std::size_t lo = n - static_cast<std::size_t>(spp);
    PumpMetrics m;
    double sum = 0.0, vmin = w.v_out[lo], vmax = w.v_out[lo];
    double psum = 0.0, i2sum = 0.0;
    for (std::size_t i = lo; i < n; ++i) {
        sum += w.v_out[i];
        vmin = std::min(vmin, w.v_out[i]);
        vmax = std::max(vmax, w.v_out[i]);
        psum += w.v_src[i] * w.i_src[i];
        i2sum += w.i_src[i] * w.i_src[i];
    }
    const double cnt = static_cast<double>(n - lo);
    m.vdc = sum / cnt;
    m.ripple = vmax - vmin;
    m.pin_steady = psum / cnt;
    m.iin_steady_rms = std::sqrt(i2sum / cnt);

    const double threshold = 0.95 * m.vdc;
    std::size_t hit = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        const bool reached = m.vdc >= 0.0 ? w.v_out[i] >= threshold
                                          : w.v_out[i] <= threshold;
        if (reached) {
            hit = i;
            break;
        }
    }
    m.startup_time = w.time[hit];

    if (hit == 0) {
        m.pin_transient_avg = w.v_src[0] * w.i_src[0];
    } else {
        double e = 0.0;
        for (std::size_t i = 1; i <= hit; ++i) {
            const double p0 = w.v_src[i - 1] * w.i_src[i - 1];
            const double p1 = w.v_src[i] * w.i_src[i];
            e += 0.5 * w.dt * (p0 + p1);
        }
        m.pin_transient_avg = e / w.time[hit];
    }
    return m;
}

}  // namespace piezotx
