// JSON encoding of matrices, states, channels and entangler oracles.
// Matrices: {"rows": n, "cols": m, "entries": [[re, im], ...]} in row-major order.
#pragma once

#include "locclab/channels.hpp"
#include "locclab/protocols.hpp"

#include <json.hpp>

namespace locclab::io {

using nlohmann::json;

class FormatError : public Error {
 public:
  using Error::Error;
};

inline json to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
    throw FormatError("matrix: expected rows, cols and entries");
  }
  const auto rows = j.at("rows").get<std::int64_t>();
  const auto cols = j.at("cols").get<std::int64_t>();
  if (rows < 1 || cols < 1) throw FormatError("matrix: rows and cols must be positive");
  const json& e = j.at("entries");
  if (!e.is_array() || static_cast<std::int64_t>(e.size()) != rows * cols) {
    throw FormatError("matrix: entries length " + std::to_string(e.size()) + " != rows x cols");
  }
  ComplexMatrix m(rows, cols);
  for (std::int64_t k = 0; k < rows * cols; ++k) {
    const json& z = e[static_cast<std::size_t>(k)];
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      throw FormatError("matrix: entry " + std::to_string(k) + " is not [re, im]");
    }
    const Complex v(z[0].get<double>(), z[1].get<double>());
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw FormatError("matrix: non-finite entry");
    m(k / cols, k % cols) = v;
  }
  return m;
}

inline json to_json(const SystemDims& d) { return d.values(); }

inline SystemDims dims_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("dims: expected an array");
  return SystemDims(j.get<std::vector<std::size_t>>());
}

inline json to_json(const DensityMatrix& rho) {
  return {{"dims", to_json(rho.dims())}, {"matrix", to_json(rho.matrix())}};
}

inline DensityMatrix density_from_json(const json& j) {
  return DensityMatrix(matrix_from_json(j.at("matrix")), dims_from_json(j.at("dims")));
}

inline json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const auto& k : ch.operators()) ops.push_back(to_json(k));
  return {{"kind", "kraus"},
          {"input_dims", to_json(ch.input_dims())},
          {"output_dims", to_json(ch.output_dims())},
          {"operators", std::move(ops)}};
}

/// "dims" stands for equal input and output dims.
inline KrausChannel kraus_from_json(const json& j) {
  std::vector<ComplexMatrix> ops;
  for (const auto& o : j.at("operators")) ops.push_back(matrix_from_json(o));
  if (j.contains("dims")) return KrausChannel(std::move(ops), dims_from_json(j.at("dims")));
  return KrausChannel(std::move(ops), dims_from_json(j.at("input_dims")), dims_from_json(j.at("output_dims")));
}

inline json to_json(const Instrument& ins) {
  json outs = json::array();
  for (const auto& o : ins.outcomes()) outs.push_back({{"label", o.label}, {"op", to_json(o.op)}});
  return {{"input_dims", to_json(ins.input_dims())}, {"output_dims", to_json(ins.output_dims())}, {"outcomes", outs}};
}

inline Instrument instrument_from_json(const json& j) {
  std::vector<InstrumentOutcome> outs;
  for (const auto& o : j.at("outcomes")) outs.push_back({o.at("label").get<std::string>(), matrix_from_json(o.at("op"))});
  if (j.contains("dims")) return Instrument(std::move(outs), dims_from_json(j.at("dims")));
  return Instrument(std::move(outs), dims_from_json(j.at("input_dims")), dims_from_json(j.at("output_dims")));
}

inline json to_json(const OneWayLccChannel& ch) {
  json bob = json::array();
  for (const auto& b : ch.bob()) bob.push_back(to_json(b));
  return {{"kind", "one_way_lcc"}, {"alice", to_json(ch.alice())}, {"branches", std::move(bob)}};
}

inline OneWayLccChannel one_way_from_json(const json& j) {
  std::vector<KrausChannel> bob;
  for (const auto& b : j.at("branches")) bob.push_back(kraus_from_json(b));
  return OneWayLccChannel(instrument_from_json(j.at("alice")), std::move(bob));
}

inline json to_json(const SeparableSuperoperator& s) {
  json pairs = json::array();
  for (const auto& p : s.pairs()) pairs.push_back({{"a", to_json(p.a)}, {"b", to_json(p.b)}});
  return {{"kind", "separable"},
          {"a_input_dims", to_json(s.a_input_dims())},
          {"a_output_dims", to_json(s.a_output_dims())},
          {"b_input_dims", to_json(s.b_input_dims())},
          {"b_output_dims", to_json(s.b_output_dims())},
          {"pairs", std::move(pairs)}};
}

inline SeparableSuperoperator separable_from_json(const json& j) {
  std::vector<SeparableSuperoperator::Pair> pairs;
  for (const auto& p : j.at("pairs")) pairs.push_back({matrix_from_json(p.at("a")), matrix_from_json(p.at("b"))});
  return SeparableSuperoperator(std::move(pairs), dims_from_json(j.at("a_input_dims")),
                                dims_from_json(j.at("a_output_dims")), dims_from_json(j.at("b_input_dims")),
                                dims_from_json(j.at("b_output_dims")));
}

/// Entangler oracle: {"realizable": bool, "branches": [{"label", "probability", "state"}]}.
inline json to_json(const EntanglerOracle& e) {
  json branches = json::array();
  for (const auto& b : e.branches()) {
    branches.push_back({{"label", b.label}, {"probability", b.probability}, {"state", to_json(b.state)}});
  }
  return {{"kind", "entangler"}, {"realizable", e.realizable()}, {"branches", std::move(branches)}};
}

inline EntanglerOracle entangler_from_json(const json& j) {
  std::vector<EntanglerBranch> branches;
  for (const auto& b : j.at("branches")) {
    branches.push_back({b.at("label").get<std::string>(), b.at("probability").get<double>(),
                        density_from_json(b.at("state"))});
  }
  return EntanglerOracle(std::move(branches), j.at("realizable").get<bool>());
}

}  // namespace locclab::io
