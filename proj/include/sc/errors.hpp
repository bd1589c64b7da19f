#pragma once

#include <stdexcept>
#include <string>

namespace sc {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct non_square_error : error {
    explicit non_square_error(const std::string& msg) : error(msg) {}
};
struct non_hermitian_error : error {
    explicit non_hermitian_error(const std::string& msg) : error(msg) {}
};
struct negative_eigenvalue_error : error {
    explicit negative_eigenvalue_error(const std::string& msg) : error(msg) {}
};
struct invalid_order_error : error {
    explicit invalid_order_error(const std::string& msg) : error(msg) {}
};
struct dimension_mismatch_error : error {
    explicit dimension_mismatch_error(const std::string& msg) : error(msg) {}
};
struct invalid_parameter_error : error {
    explicit invalid_parameter_error(const std::string& msg) : error(msg) {}
};
struct invalid_probability_error : error {
    explicit invalid_probability_error(const std::string& msg) : error(msg) {}
};
struct not_cptp_error : error {
    explicit not_cptp_error(const std::string& msg) : error(msg) {}
};
struct not_separable_input_error : error {
    explicit not_separable_input_error(const std::string& msg) : error(msg) {}
};
struct state_invalid_error : error {
    explicit state_invalid_error(const std::string& msg) : error(msg) {}
};
struct dimension_cap_error : error {
    explicit dimension_cap_error(const std::string& msg) : error(msg) {}
};
struct not_entanglement_breaking_error : error {
    explicit not_entanglement_breaking_error(const std::string& msg) : error(msg) {}
};
struct budget_exhausted_error : error {
    explicit budget_exhausted_error(const std::string& msg) : error(msg) {}
};
struct usage_error : error {
    explicit usage_error(const std::string& msg) : error(msg) {}
};
struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};
struct convergence_error : error {
    explicit convergence_error(const std::string& msg) : error(msg) {}
};

}  // namespace sc
