#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "coisocap/capacity.hpp"
#include "coisocap/clarke_dual.hpp"
#include "coisocap/convex_body.hpp"
#include "coisocap/fourier_loop.hpp"
#include "coisocap/spectrum.hpp"

namespace coisocap {

using nlohmann::json;

/// Body schema:
///   {"type":"ball","r":1.0}                      (optional "dim")
///   {"type":"ellipsoid","radii":[r1..rn]}        (per-plane radii)
///   {"type":"lp_ball","p":4,"radii":[r1..rn]}
///   {"type":"product","factors":[...]}
///   {"type":"translate","shift":[2n reals],"base":{...}}
/// A ball without "dim" takes the ambient dimension at top level and is a
/// disc (dim 2) inside a product.  Throws std::invalid_argument on schema
/// violations.
BodyPtr body_from_json(const json& j, int ambient_dim);
json body_to_json(const Body& body);

json loop_to_json(const FourierLoop& loop);
FourierLoop loop_from_json(const json& j);

json chord_to_json(const Chord& chord, bool include_samples = false);
std::string chord_to_csv(const Chord& chord);

json spectrum_to_json(const Spectrum& sp);
std::string spectrum_to_csv(const Spectrum& sp);

json estimate_to_json(const CapacityEstimate& est, bool include_minimizer = false);
json axiom_report_to_json(const AxiomReport& rep);

/// Rounds to the given number of significant digits (CLI output policy).
double round_sig(double x, int digits = 12);

}  // namespace coisocap
