// Error taxonomy shared by all iglab components.
//
// Every failure carries an errc code. Codes group into three classes that
// map onto the CLI exit codes: usage errors (2), data/format errors (3),
// numeric/domain errors (4).
#pragma once

#include <stdexcept>
#include <string>

namespace iglab {

enum class errc {
  // data & format (exit 3)
  bad_magic,
  truncated,
  shape_mismatch,
  unsupported_format,
  non_finite,
  label_out_of_range,
  parse_error,
  pose_invalid,
  missing_file,
  io_failure,
  bad_manifest,
  dimension_mismatch,
  row_count_mismatch,
  class_map_mismatch,
  length_mismatch,
  bank_invariant,
  voxel_size_mismatch,
  // usage (exit 2)
  usage,
  // numeric & domain (exit 4)
  empty_selection,
  zero_norm_patch,
  zero_norm_average,
  empty_bank,
  empty_subclass,
  single_subclass,
  no_convergence,
  infeasible_config,
  all_undefined,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::bad_magic: return "bad-magic";
    case errc::truncated: return "truncated";
    case errc::shape_mismatch: return "shape-mismatch";
    case errc::unsupported_format: return "unsupported-format";
    case errc::non_finite: return "non-finite";
    case errc::label_out_of_range: return "label-out-of-range";
    case errc::parse_error: return "parse-error";
    case errc::pose_invalid: return "pose-invalid";
    case errc::missing_file: return "missing-file";
    case errc::io_failure: return "io-failure";
    case errc::bad_manifest: return "bad-manifest";
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::row_count_mismatch: return "row-count-mismatch";
    case errc::class_map_mismatch: return "class-map-mismatch";
    case errc::length_mismatch: return "length-mismatch";
    case errc::bank_invariant: return "bank-invariant";
    case errc::voxel_size_mismatch: return "voxel-size-mismatch";
    case errc::usage: return "usage";
    case errc::empty_selection: return "empty-selection";
    case errc::zero_norm_patch: return "zero-norm-patch";
    case errc::zero_norm_average: return "zero-norm-average";
    case errc::empty_bank: return "empty-bank";
    case errc::empty_subclass: return "empty-subclass";
    case errc::single_subclass: return "single-subclass";
    case errc::no_convergence: return "no-convergence";
    case errc::infeasible_config: return "infeasible-config";
    case errc::all_undefined: return "all-undefined";
  }
  return "unknown";
}

// Exit code class for a failure: 2 usage, 3 data/format, 4 numeric/domain.
inline int exit_code_for(errc c) {
  switch (c) {
    case errc::usage:
      return 2;
    case errc::empty_selection:
    case errc::zero_norm_patch:
    case errc::zero_norm_average:
    case errc::empty_bank:
    case errc::empty_subclass:
    case errc::single_subclass:
    case errc::no_convergence:
    case errc::infeasible_config:
    case errc::all_undefined:
      return 4;
    default:
      return 3;
  }
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace iglab
