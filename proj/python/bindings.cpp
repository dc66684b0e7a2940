#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "secik/arm_angle.hpp"
#include "secik/ik.hpp"
#include "secik/quartic.hpp"
#include "secik/singularity.hpp"

namespace py = pybind11;
using namespace secik;

namespace {

// Whole-request failure; the tag is the first word of the message.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T unwrap(const Expected<T>& e) {
  if (!e) throw SolverError(std::string(to_string(e.error())));
  return *e;
}

JointConfig to_joints(const std::array<double, kNumJoints>& q) { return JointConfig(q); }

Transform to_transform(const Eigen::Matrix4d& m) {
  if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("pose must be a homogeneous 4x4 matrix");
  }
  const Mat3 r = m.topLeftCorner<3, 3>();
  if (!(r.transpose() * r - Mat3::Identity()).isZero(1e-9) || r.determinant() < 0.0) {
    throw std::invalid_argument("invalid_rotation");
  }
  Transform t = Transform::Identity();
  t.linear() = r;
  t.translation() = m.topRightCorner<3, 1>();
  return t;
}

py::dict label_dict(const BranchLabel& l) {
  py::dict d;
  d["root_index"] = l.root_index;
  d["q6_sign"] = l.q6_sign;
  d["q4_sign"] = l.q4_sign;
  d["q2_sign"] = l.q2_sign;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form inverse kinematics for a 7-DOF arm with a wrist offset";
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<RobotParams>(m, "RobotParams")
      .def(py::init<double, double, double, double>(), py::arg("d_bs"), py::arg("d_se"), py::arg("d_ew"), py::arg("a_wr"))
      .def_static("moz1_placeholder", &RobotParams::moz1_placeholder)
      .def_property_readonly("d_bs", &RobotParams::d_bs)
      .def_property_readonly("d_se", &RobotParams::d_se)
      .def_property_readonly("d_ew", &RobotParams::d_ew)
      .def_property_readonly("a_wr", &RobotParams::a_wr)
      .def("__repr__", [](const RobotParams& p) {
        return "RobotParams(d_bs=" + std::to_string(p.d_bs()) + ", d_se=" + std::to_string(p.d_se()) +
               ", d_ew=" + std::to_string(p.d_ew()) + ", a_wr=" + std::to_string(p.a_wr()) + ")";
      });

  py::class_<IkBranch>(m, "Branch")
      .def_property_readonly("joints", [](const IkBranch& b) { return b.joints.q; })
      .def_property_readonly("label", [](const IkBranch& b) { return label_dict(b.label); })
      .def_readonly("t6", &IkBranch::t6)
      .def_readonly("r6", &IkBranch::r6)
      .def_readonly("q8", &IkBranch::q8)
      .def_property_readonly("translation_error", [](const IkBranch& b) { return b.residuals.translation; })
      .def_property_readonly("rotation_error", [](const IkBranch& b) { return b.residuals.rotation; });

  py::class_<Rejection>(m, "Rejection")
      .def_property_readonly("label", [](const Rejection& r) { return label_dict(r.label); })
      .def_property_readonly("reason", [](const Rejection& r) { return std::string(to_string(r.reason)); })
      .def_readonly("value", &Rejection::value);

  py::class_<SolutionSet>(m, "SolutionSet")
      .def_readonly("branches", &SolutionSet::branches)
      .def_readonly("rejected", &SolutionSet::rejected)
      .def_property_readonly("d_sc", [](const SolutionSet& s) { return s.reduced.d_sc; })
      .def_property_readonly("q", [](const SolutionSet& s) { return s.reduced.q; })
      .def_property_readonly("al", [](const SolutionSet& s) { return s.reduced.al; })
      .def_property_readonly("quartic", [](const SolutionSet& s) {
        return std::array<double, 5>{s.setup.g.g4, s.setup.g.g3, s.setup.g.g2, s.setup.g.g1, s.setup.g.g0};
      })
      .def("__len__", [](const SolutionSet& s) { return s.branches.size(); });

  m.def(
      "fk",
      [](const RobotParams& p, const std::array<double, kNumJoints>& q) -> Eigen::Matrix4d {
        return forward_kinematics(p, to_joints(q)).matrix();
      },
      py::arg("params"), py::arg("joints"), "Pose of frame 7 as a 4x4 matrix.");

  m.def(
      "frame_points",
      [](const RobotParams& p, const std::array<double, kNumJoints>& q) {
        const FramePoints f = frame_points(p, to_joints(q));
        py::dict d;
        d["S"] = f.shoulder;
        d["E"] = f.elbow;
        d["W"] = f.wrist;
        d["C"] = f.center7;
        return d;
      },
      py::arg("params"), py::arg("joints"));

  m.def(
      "arm_angle", [](const RobotParams& p, const std::array<double, kNumJoints>& q) { return unwrap(arm_angle(p, to_joints(q))); },
      py::arg("params"), py::arg("joints"));

  m.def(
      "solve",
      [](const RobotParams& p, const Eigen::Matrix4d& pose, double psi) { return unwrap(solve(p, to_transform(pose), psi)); },
      py::arg("params"), py::arg("pose"), py::arg("psi"), "All IK branches for a 4x4 pose at arm angle psi.");

  m.def(
      "classify",
      [](const RobotParams& p, const std::array<double, kNumJoints>& q) {
        ClassifyOptions opts;
        opts.compute_jacobian = true;
        const SingularityReport r = classify(to_joints(q), p, opts);
        py::list kin;
        py::list alg;
        for (const auto& h : r.kinematic_hits) kin.append(py::make_tuple(std::string(to_string(h.condition)), h.distance));
        for (const auto& h : r.algorithmic_hits) alg.append(py::make_tuple(std::string(to_string(h.condition)), h.distance));
        py::dict d;
        d["kinematic"] = kin;
        d["algorithmic"] = alg;
        d["min_singular_value"] = *r.min_singular_value;
        return d;
      },
      py::arg("params"), py::arg("joints"));

  m.def(
      "solve_quartic",
      [](double g4, double g3, double g2, double g1, double g0) {
        const RealRoots r = unwrap(solve_quartic({g4, g3, g2, g1, g0}));
        py::list out;
        for (int i = 0; i < r.count; ++i) out.append(py::make_tuple(r.values[i], r.multiplicity[i]));
        return out;
      },
      py::arg("g4"), py::arg("g3"), py::arg("g2"), py::arg("g1"), py::arg("g0"),
      "Distinct real roots as (value, multiplicity), ascending.");
}
