// error.hpp: error codes and the exception type shared by all femlite modules.

#pragma once

#include <stdexcept>
#include <string>

namespace femlite {

enum class ErrorCode {
    index_out_of_range,
    shape_mismatch,
    non_positive_volume,
    invalid_flag_value,
    degenerate_element,
    invalid_parameter,
    parse_error,
    io_error,
    unknown_rule,
    unsorted_index_set,
    too_large_for_dense,
    not_positive_definite,
    max_iter_exceeded,
    no_dirichlet_boundary,
    unsupported_boundary_type,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace femlite
