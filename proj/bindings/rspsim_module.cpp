#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <vector>

#include "rsp/analysis.hpp"
#include "rsp/protocol.hpp"
#include "rsp/qstate.hpp"
#include "rsp/random.hpp"

namespace py = pybind11;
using namespace rsp;

namespace {

int infer_qubits(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

std::vector<std::vector<Amplitude>> matrix_rows(const UnitaryMatrix& u) {
  std::vector<std::vector<Amplitude>> rows(u.dim());
  for (std::size_t r = 0; r < u.dim(); ++r) {
    rows[r].resize(u.dim());
    for (std::size_t c = 0; c < u.dim(); ++c) rows[r][c] = u.at(r, c);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact simulator for remote preparation of two-qubit states "
            "over maximally or partially entangled channels";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<DegenerateBranchError>(m, "DegenerateBranchError",
                                                PyExc_ValueError);

  py::enum_<Outcome>(m, "Outcome")
      .value("PHI", Outcome::Phi)
      .value("PHI_PERP", Outcome::PhiPerp)
      .value("PSI", Outcome::Psi)
      .value("PSI_PERP", Outcome::PsiPerp);

  py::enum_<AuxOutcome>(m, "AuxOutcome")
      .value("AUX0", AuxOutcome::Aux0)
      .value("AUX1", AuxOutcome::Aux1);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init([](const std::vector<Amplitude>& amps, bool normalized) {
             return StateVector(infer_qubits(amps.size()), amps, normalized);
           }),
           py::arg("amplitudes"), py::arg("normalized") = true)
      .def_static("basis_state", &StateVector::basis_state,
                  py::arg("n_qubits"), py::arg("index"))
      .def_property_readonly("n_qubits", &StateVector::n_qubits)
      .def_property_readonly("normalized", &StateVector::is_normalized)
      .def_property_readonly(
          "amplitudes",
          [](const StateVector& s) { return s.amps(); })
      .def("norm_sq", &StateVector::norm_sq)
      .def("normalized_copy", &StateVector::normalized_copy)
      .def("__len__", [](const StateVector& s) { return s.dim(); })
      .def("__repr__", [](const StateVector& s) {
        return "StateVector(n_qubits=" + std::to_string(s.n_qubits()) +
               (s.is_normalized() ? ", normalized" : ", unnormalized") + ")";
      });

  py::class_<UnitaryMatrix>(m, "UnitaryMatrix")
      .def_property_readonly("dim", &UnitaryMatrix::dim)
      .def("at", [](const UnitaryMatrix& u, std::size_t r, std::size_t c) {
        return u.at(r, c);
      })
      .def("rows", &matrix_rows);

  py::class_<TargetState>(m, "TargetState")
      .def_property_readonly("alpha", &TargetState::alpha)
      .def_property_readonly("beta", &TargetState::beta)
      .def_property_readonly("gamma", &TargetState::gamma)
      .def_property_readonly("delta", &TargetState::delta)
      .def("to_state", &TargetState::to_state);

  py::class_<ChannelPair>(m, "ChannelPair")
      .def(py::init<double, double, double, double>(), py::arg("a"),
           py::arg("b"), py::arg("c"), py::arg("d"))
      .def_static("from_ac", &ChannelPair::from_ac, py::arg("a"), py::arg("c"))
      .def_static("epr", &ChannelPair::epr)
      .def_property_readonly("a", &ChannelPair::a)
      .def_property_readonly("b", &ChannelPair::b)
      .def_property_readonly("c", &ChannelPair::c)
      .def_property_readonly("d", &ChannelPair::d);

  py::class_<MeasurementBasis>(m, "MeasurementBasis")
      .def("vector", &MeasurementBasis::vector, py::arg("outcome"));

  py::class_<AliceMeasurement>(m, "AliceMeasurement")
      .def_readonly("outcome", &AliceMeasurement::outcome)
      .def_readonly("bob_state", &AliceMeasurement::bob_state)
      .def_readonly("probability", &AliceMeasurement::probability);

  py::class_<AuxStageResult>(m, "AuxStageResult")
      .def_readonly("outcome", &AuxStageResult::outcome)
      .def_readonly("final_state", &AuxStageResult::final_state)
      .def_readonly("conditional_probability",
                    &AuxStageResult::conditional_probability);

  py::class_<ProtocolResult>(m, "ProtocolResult")
      .def_readonly("alice_outcome", &ProtocolResult::alice_outcome)
      .def_readonly("alice_probability", &ProtocolResult::alice_probability)
      .def_readonly("corrected", &ProtocolResult::corrected)
      .def_readonly("aux_outcome", &ProtocolResult::aux_outcome)
      .def_readonly("aux_probability", &ProtocolResult::aux_probability)
      .def_readonly("final_bob_state", &ProtocolResult::final_bob_state)
      .def_readonly("fidelity_to_target", &ProtocolResult::fidelity_to_target)
      .def_readonly("success", &ProtocolResult::success);

  py::class_<BranchReport>(m, "BranchReport")
      .def_readonly("branch_probability", &BranchReport::branch_probability)
      .def_readonly("branch_success", &BranchReport::branch_success)
      .def_readonly("total_success", &BranchReport::total_success);

  py::class_<MonteCarloSummary>(m, "MonteCarloSummary")
      .def_readonly("trials", &MonteCarloSummary::trials)
      .def_readonly("successes", &MonteCarloSummary::successes)
      .def_readonly("estimated_rate", &MonteCarloSummary::estimated_rate)
      .def_readonly("standard_error", &MonteCarloSummary::standard_error)
      .def_readonly("seed", &MonteCarloSummary::seed);

  m.def("validate_target", &validate_target, py::arg("alpha"), py::arg("beta"),
        py::arg("gamma"), py::arg("delta"));
  m.def("build_measurement_basis", &build_measurement_basis, py::arg("target"));
  m.def("build_channel_state", &build_channel_state, py::arg("channel"));

  m.def(
      "alice_measure",
      [](const StateVector& channel_state, const MeasurementBasis& basis,
         std::optional<Outcome> forced, std::uint64_t seed) {
        if (forced) return alice_measure(channel_state, basis, *forced);
        RandomStream rng(seed);
        return alice_measure(channel_state, basis, rng);
      },
      py::arg("channel_state"), py::arg("basis"),
      py::arg("forced") = std::nullopt, py::arg("seed") = 0);

  m.def("bob_primary_correction", &bob_primary_correction, py::arg("outcome"));
  m.def("build_aux_unitary", &build_aux_unitary, py::arg("channel"),
        py::arg("outcome"));

  m.def(
      "bob_aux_stage",
      [](const StateVector& corrected_state, const ChannelPair& ch,
         Outcome outcome, std::optional<AuxOutcome> forced,
         std::uint64_t seed) {
        if (forced) return bob_aux_stage(corrected_state, ch, outcome, *forced);
        RandomStream rng(seed);
        return bob_aux_stage(corrected_state, ch, outcome, rng);
      },
      py::arg("corrected_state"), py::arg("channel"), py::arg("outcome"),
      py::arg("forced") = std::nullopt, py::arg("seed") = 0);

  m.def(
      "run_protocol",
      [](const TargetState& t, const ChannelPair& ch, std::uint64_t seed,
         std::optional<Outcome> forced_outcome,
         std::optional<AuxOutcome> forced_aux) {
        RandomStream rng(seed);
        return run_protocol(t, ch, rng, RunOptions{forced_outcome, forced_aux});
      },
      py::arg("target"), py::arg("channel"), py::arg("seed") = 0,
      py::arg("forced_outcome") = std::nullopt,
      py::arg("forced_aux") = std::nullopt);

  m.def("exact_branch_report", &exact_branch_report, py::arg("target"),
        py::arg("channel"));
  m.def("closed_form_success", &closed_form_success, py::arg("channel"));
  m.def("monte_carlo", &monte_carlo, py::arg("target"), py::arg("channel"),
        py::arg("trials"), py::arg("seed") = 0);
  m.def("oracle_reconstruct", &oracle_reconstruct, py::arg("target"),
        py::arg("channel"));

  m.def("tensor", &tensor, py::arg("left"), py::arg("right"));
  m.def(
      "permute_qubits",
      [](const StateVector& s, const std::vector<int>& perm) {
        return permute_qubits(s, perm);
      },
      py::arg("state"), py::arg("perm"));
  m.def(
      "apply_unitary",
      [](const StateVector& s, const UnitaryMatrix& u,
         const std::vector<int>& targets) {
        return apply_unitary(s, u, targets);
      },
      py::arg("state"), py::arg("u"), py::arg("targets"));
  m.def(
      "project_subsystem",
      [](const StateVector& s, const StateVector& bra,
         const std::vector<int>& targets) {
        Projection p = project_subsystem(s, bra, targets);
        return py::make_tuple(p.residual, p.probability);
      },
      py::arg("state"), py::arg("bra"), py::arg("targets"));
  m.def("fidelity_up_to_phase", &fidelity_up_to_phase, py::arg("x"),
        py::arg("y"));
  m.def("check_unitary", &check_unitary, py::arg("u"), py::arg("tol"));

#ifdef RSPSIM_VERSION
  m.attr("__version__") = RSPSIM_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
