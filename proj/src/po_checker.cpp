#include "stopctl/po_checker.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "stopctl/bounds.hpp"

namespace stopctl::po {

namespace {

void append_prefixed(std::vector<Check>& out, const Judgement& j, const std::string& prefix) {
    for (const Check& c : j.checks) {
        Check copy = c;
        copy.name = prefix + "." + c.name;
        out.push_back(std::move(copy));
    }
}

void require_covers(const Fragment& f) {
    const double end = f.trajectory.samples.empty() ? 0.0 : f.trajectory.back().t;
    const double horizon = f.input.horizon();
    if (horizon < end && end - horizon > kTimeSnapTolerance * std::max(1.0, end)) {
        throw UsageError("fragment input does not cover its trajectory span");
    }
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

}  // namespace

Fragment make_fragment(const SystemParams& params, const ControlSignal& input, const GridSpec& grid) {
    return Fragment{integrate(params, input, grid), input, {}};
}

Check check_le(std::string name, double lhs, double rhs) {
    return Check{std::move(name), lhs, rhs, false, lhs <= rhs};
}

Check check_eq(std::string name, double lhs, double rhs) {
    return Check{std::move(name), lhs, rhs, true, lhs == rhs};
}

Judgement Judgement::all_of(std::vector<Check> checks) {
    Judgement j{true, std::move(checks)};
    for (const Check& c : j.checks) {
        j.holds = j.holds && c.holds;
    }
    return j;
}

StateRelation always_related() {
    return [](const State&, const State&) { return Judgement::constant(true); };
}

StateRelation identity_relation(double tolerance) {
    return [tolerance](const State& a, const State& c) {
        if (tolerance == 0.0) {
            return Judgement::all_of({check_eq("x", a.x, c.x), check_eq("v", a.v, c.v)});
        }
        return Judgement::all_of(
            {check_le("abs_dx", std::abs(a.x - c.x), tolerance), check_le("abs_dv", std::abs(a.v - c.v), tolerance)});
    };
}

InputRelation any_inputs() {
    return [](const ControlSignal&, const ControlSignal&) { return Judgement::constant(true); };
}

OutputRelation any_outputs() {
    return [](std::span<const double>, std::span<const double>) { return Judgement::constant(true); };
}

RetrenchmentData train_retrenchment_data(const SystemParams& params, const GridSpec& grid) {
    return train_retrenchment_data(params, grid, bounds::gronwall_bound(params));
}

RetrenchmentData train_retrenchment_data(const SystemParams& params, const GridSpec& grid, double output_bound) {
    RetrenchmentData data;
    data.retrieve = always_related();
    const double l2_bound = bounds::l2_control_gap_bound(params);
    data.within = [params, grid, l2_bound](const ControlSignal& u, const ControlSignal& u_d, const State& x,
                                           const State& y) {
        const double l2 = bounds::l2_control_gap_numeric(u, u_d, params, grid);
        return Judgement::all_of(
            {check_eq("x0", x.x, y.x), check_eq("v0", x.v, y.v), check_le("l2_control_gap", l2, l2_bound)});
    };
    data.output = [output_bound](const State& x, const State& y, std::span<const double>, std::span<const double>) {
        return Judgement::all_of({check_le("abs_dx", std::abs(x.x - y.x), output_bound),
                                  check_le("abs_dv", std::abs(x.v - y.v), output_bound)});
    };
    data.concedes = [](const State&, const State&, std::span<const double>, std::span<const double>) {
        return Judgement::constant(false);
    };
    return data;
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::pass:
            return "pass";
        case Verdict::fail_hypothesis_unmet:
            return "fail_hypothesis_unmet";
        case Verdict::fail_conclusion:
            return "fail_conclusion";
    }
    return "unknown";
}

bool check_init_po(const State& abstract_init, const State& concrete_init, const StateRelation& retrieve) {
    return retrieve(abstract_init, concrete_init).holds;
}

POResult check_retrenchment_po(const Fragment& abstract, const Fragment& concrete, const RetrenchmentData& data) {
    require_same_grid(abstract.trajectory, concrete.trajectory);
    if (abstract.trajectory.samples.empty()) {
        throw UsageError("fragments have no samples");
    }
    require_covers(abstract);
    require_covers(concrete);

    POResult result;
    const State& x = abstract.trajectory.front().state;
    const State& y = concrete.trajectory.front().state;
    const State& x_after = abstract.trajectory.back().state;
    const State& y_after = concrete.trajectory.back().state;

    const Judgement r_before = data.retrieve(x, y);
    const Judgement within = data.within(abstract.input, concrete.input, x, y);
    const Judgement r_after = data.retrieve(x_after, y_after);
    const Judgement output = data.output(x_after, y_after, abstract.outputs, concrete.outputs);
    const Judgement concedes = data.concedes(x_after, y_after, abstract.outputs, concrete.outputs);

    append_prefixed(result.witness, r_before, "R_before");
    append_prefixed(result.witness, within, "W");
    append_prefixed(result.witness, r_after, "R_after");
    append_prefixed(result.witness, output, "O");
    append_prefixed(result.witness, concedes, "C");

    // O along the whole fragment; keeps the worst lhs of each named check.
    result.output_holds_throughout = true;
    result.worst_sample_time = abstract.trajectory.back().t;
    std::map<std::string, Check> worst;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < abstract.trajectory.samples.size(); ++i) {
        const Judgement j = data.output(abstract.trajectory.samples[i].state, concrete.trajectory.samples[i].state,
                                        abstract.outputs, concrete.outputs);
        if (!j.holds && result.output_holds_throughout) {
            result.output_holds_throughout = false;
            result.worst_sample_time = abstract.trajectory.samples[i].t;
        }
        for (const Check& c : j.checks) {
            auto [it, inserted] = worst.try_emplace(c.name, c);
            if (inserted) {
                order.push_back(c.name);
            } else if (c.lhs - c.rhs > it->second.lhs - it->second.rhs) {
                it->second = c;
            }
        }
    }
    for (const std::string& name : order) {
        Check c = worst.at(name);
        c.name = "O_all_samples." + name;
        result.witness.push_back(std::move(c));
    }

    if (!(r_before.holds && within.holds)) {
        result.verdict = Verdict::fail_hypothesis_unmet;
    } else if ((r_after.holds && output.holds) || concedes.holds) {
        result.verdict = Verdict::pass;
    } else {
        result.verdict = Verdict::fail_conclusion;
    }
    return result;
}

POResult check_refinement_po(const Fragment& abstract, const Fragment& concrete, const StateRelation& retrieve,
                             const InputRelation& in, const OutputRelation& out) {
    RetrenchmentData data;
    data.retrieve = retrieve;
    data.within = [in](const ControlSignal& is, const ControlSignal& js, const State&, const State&) {
        return in(is, js);
    };
    data.output = [out](const State&, const State&, std::span<const double> os, std::span<const double> ps) {
        return out(os, ps);
    };
    data.concedes = [](const State&, const State&, std::span<const double>, std::span<const double>) {
        return Judgement::constant(false);
    };
    return check_retrenchment_po(abstract, concrete, data);
}

Corroboration corroboration(const SystemParams& params) {
    const double Ts = params.stop_time();
    const double n = static_cast<double>(params.periods());
    Corroboration c;
    c.lhs = Ts / 12.0 * (1.0 + 1.0 / n);
    c.rhs = std::exp(Ts);
    c.holds = c.lhs <= c.rhs;
    return c;
}

void write_report(std::ostream& os, const POResult& result) {
    os << "verdict: " << to_string(result.verdict) << '\n';
    for (const Check& c : result.witness) {
        os << "  [" << (c.holds ? "ok" : "FAIL") << "] " << c.name << ": " << format_number(c.lhs)
           << (c.equality ? " == " : " <= ") << format_number(c.rhs) << '\n';
    }
    os << "output relation throughout fragment: " << (result.output_holds_throughout ? "holds" : "violated");
    if (!result.output_holds_throughout) {
        os << " (first at t = " << format_number(result.worst_sample_time) << ")";
    }
    os << '\n';
}

void write_witness_csv(std::ostream& os, const POResult& result) {
    os << "relation,name,lhs,rhs,holds\n";
    for (const Check& c : result.witness) {
        const auto dot = c.name.find('.');
        const std::string relation = dot == std::string::npos ? c.name : c.name.substr(0, dot);
        const std::string name = dot == std::string::npos ? "" : c.name.substr(dot + 1);
        os << relation << ',' << name << ',' << format_number(c.lhs) << ',' << format_number(c.rhs) << ','
           << (c.holds ? 1 : 0) << '\n';
    }
}

}  // namespace stopctl::po
