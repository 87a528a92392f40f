#pragma once

#include <string>
#include <vector>

#include "magobs/fields.hpp"
#include "magobs/geometry.hpp"
#include "magobs/obs.hpp"
#include "magobs/quasimode.hpp"
#include "magobs/spectral.hpp"
#include "magobs/weyl.hpp"

namespace magobs::io {

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// CSV text with a fixed header. Numbers are printed with 17 significant
/// digits so identical inputs give identical bytes.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  Csv& row(const std::vector<std::string>& cells);
  std::size_t columns() const { return header_.size(); }
  const std::string& str() const { return text_; }

  static std::string num(double v);
  static std::string num(long long v);
  static std::string num(int v) { return num(static_cast<long long>(v)); }
  static std::string num(std::size_t v) { return num(static_cast<long long>(v)); }

 private:
  std::vector<std::string> header_;
  std::string text_;
};

/// [{k1, k2, re, im}, ...] over the nonzero modes.
std::string field_json(const FourierField2D& f);
FourierField2D field_from_json(const std::string& text, bool is_real = true);
/// {ell, modes: [{m, re, im}, ...]}
std::string circle_json(const CircleFunction& f);

std::string mgcc_json(const MgccReport& report);
Csv mgcc_csv(const MgccReport& report);

std::string gcc_json(const GccReport& report);

std::string wkb_json(const WkbSolution& wkb, const QuasimodeParams& params);

Csv obs_csv(const std::vector<ObsReport>& reports);
Csv resolvent_csv(const ResolventScan& scan);
Csv residual_csv(const ResidualScan& scan);
Csv witness_csv(const std::vector<WitnessRecord>& records);
Csv remainder_csv(const RemainderScan& scan);
Csv spectrum_csv(const RVector& values);
Csv control_csv(const HumResult& hum);

/// Raw column-major complex doubles to `stem`.bin and a JSON header
/// {N, n1, n2, center, ordering, hermitian_defect, ...} to `stem`.json.
void dump_operator(const std::string& stem, const HermitianOperator& op);

}  // namespace magobs::io
