#pragma once

#include <string>

#include <json.hpp>

#include "perideg/certify.hpp"
#include "perideg/galerkin.hpp"
#include "perideg/ring.hpp"
#include "perideg/systems.hpp"

namespace perideg {

/// Insertion-ordered JSON so identical inputs give byte-identical reports.
using Json = nlohmann::ordered_json;

Json ring_to_json(const RingElement& e);
RingElement ring_from_json(const Json& j);

/// Accepts entries as numbers or as exact expression strings ("7/2",
/// "1/(2*sqrt(2))").
SymMatrix matrix_from_json(const Json& j, int expected_dim = -1);
Json matrix_to_json(const SymMatrix& m);

/// Reads a system from its JSON description: either the explicit form
///   {"n", "T", "v_inf", "a"?, "critical_points": [{"id","x","hessian"}...]}
/// or the synthesized form {"model": {"n", "T", "v_inf", "a"}}.
/// When the model coupling "a" is present the potential callbacks and the
/// closed-form index at infinity are attached.
SystemSpec system_from_json(const Json& j);
Json system_to_json(const SystemSpec& spec);

Json index_to_json(const EquivariantIndex& idx);
EquivariantIndex index_from_json(const Json& j);

Json certificate_to_json(const ExistenceCertificate& cert);
ExistenceCertificate certificate_from_json(const Json& j);

Json continuation_to_json(const ContinuationCertificate& cert);

Json orbit_to_json(const OrbitResult& orbit);
Json branch_to_json(const BranchRecord& branch);

/// Uniform-grid samples of the loop as CSV rows "t,x_1,...,x_n".
std::string orbit_to_csv(const FourierLoop& loop, int samples = 256);

/// FNV-1a 64-bit content hash used for certificate provenance.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace perideg
