#pragma once

// Refinement and retrenchment proof obligations over pairs of trajectory
// fragments.
//
// Retrenchment correctness, for an abstract fragment x..x' and a concrete
// fragment y..y' driven by inputs is/js:
//
//   R(x, y) && W(is, js, x, y)  =>  (R(x', y') && O(x', y')) || C(x', y')
//
// The existential over abstract fragments is discharged by the caller, who
// supplies the abstract fragment as the witness. Refinement correctness is
// the special case W := In, O := Out, C := false.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stopctl/model.hpp"
#include "stopctl/simulate.hpp"

namespace stopctl::po {

/// One execution piece: a trajectory, the input that drove it and its outputs.
struct Fragment {
    Trajectory trajectory;
    ControlSignal input;
    std::vector<double> outputs;
};

/// Builds a fragment by integrating `input` from (0, V); throws UsageError if
/// the input does not cover the trajectory span.
Fragment make_fragment(const SystemParams& params, const ControlSignal& input, const GridSpec& grid = {});

/// A recorded comparison `lhs <= rhs` (or `lhs == rhs` when `equality`).
struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool equality = false;
    bool holds = false;
};

Check check_le(std::string name, double lhs, double rhs);
Check check_eq(std::string name, double lhs, double rhs);

/// Predicate value together with the comparisons that decided it.
struct Judgement {
    bool holds = true;
    std::vector<Check> checks;

    static Judgement constant(bool value) { return Judgement{value, {}}; }
    static Judgement all_of(std::vector<Check> checks);
};

using StateRelation = std::function<Judgement(const State& abstract_state, const State& concrete_state)>;

using WithinRelation = std::function<Judgement(const ControlSignal& abstract_input,
                                               const ControlSignal& concrete_input,
                                               const State& abstract_before, const State& concrete_before)>;

/// Over after-states and the fragments' outputs.
using AfterRelation =
    std::function<Judgement(const State& abstract_after, const State& concrete_after,
                            std::span<const double> abstract_outputs, std::span<const double> concrete_outputs)>;

using InputRelation = std::function<Judgement(const ControlSignal& abstract_input, const ControlSignal& concrete_input)>;
using OutputRelation =
    std::function<Judgement(std::span<const double> abstract_outputs, std::span<const double> concrete_outputs)>;

struct RetrenchmentData {
    StateRelation retrieve;
    WithinRelation within;
    AfterRelation output;
    AfterRelation concedes;
};

StateRelation always_related();
/// Componentwise |dx| <= tol and |dv| <= tol; tol = 0 is exact identity.
StateRelation identity_relation(double tolerance = 0.0);
InputRelation any_inputs();
OutputRelation any_outputs();

/// R = true; W = equal initial states and ||u - u_D||_2 <= a_D T sqrt(T_stop);
/// O = |dx|, |dv| at T_stop each <= e^{T_stop} a_D T T_stop; C = false.
/// `grid` sets the quadrature used by W.
RetrenchmentData train_retrenchment_data(const SystemParams& params, const GridSpec& grid = {});

/// As train_retrenchment_data with O's bound replaced by `output_bound`.
RetrenchmentData train_retrenchment_data(const SystemParams& params, const GridSpec& grid, double output_bound);

enum class Verdict { pass, fail_hypothesis_unmet, fail_conclusion };

std::string to_string(Verdict verdict);

struct POResult {
    Verdict verdict = Verdict::fail_conclusion;
    /// Every comparison made, prefixed by the relation that made it.
    std::vector<Check> witness;
    /// O evaluated at every shared sample time, not only at the end.
    bool output_holds_throughout = false;
    double worst_sample_time = 0.0;  ///< first sample where O fails (or T_stop)

    bool passed() const { return verdict == Verdict::pass; }
};

/// Initialization PO: the supplied abstract initial state witnesses R.
bool check_init_po(const State& abstract_init, const State& concrete_init, const StateRelation& retrieve);

/// Retrenchment correctness PO on one fragment pair. Returns
/// fail_hypothesis_unmet when R && W fails on the before-data. Throws
/// UsageError when the fragments do not share sample times.
POResult check_retrenchment_po(const Fragment& abstract, const Fragment& concrete, const RetrenchmentData& data);

/// Refinement correctness PO, checked as retrenchment with C = false.
POResult check_refinement_po(const Fragment& abstract, const Fragment& concrete, const StateRelation& retrieve,
                             const InputRelation& in, const OutputRelation& out);

struct Corroboration {
    bool holds = false;
    double lhs = 0.0;  ///< T_stop (1 + 1/N) / 12
    double rhs = 0.0;  ///< e^{T_stop}
};

/// Exact final gap against the explicit bound, with a_D T T_stop cancelled.
Corroboration corroboration(const SystemParams& params);

void write_report(std::ostream& os, const POResult& result);
/// "relation,name,lhs,rhs,holds" rows with header.
void write_witness_csv(std::ostream& os, const POResult& result);

}  // namespace stopctl::po
