#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fqdescent {

/// Base class for all recoverable domain errors raised by this library.
/// Programming errors (violated preconditions) throw std::invalid_argument
/// or std::logic_error instead and are not part of this hierarchy.
class DomainError : public std::runtime_error {
   public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept = 0;
};

/// A requested construction would exceed the configured absolute-degree
/// (or iteration-order) bound.
class CapacityError : public DomainError {
   public:
    CapacityError(const std::string& what, std::uint64_t requested, std::uint64_t bound)
        : DomainError(what), requested_(requested), bound_(bound) {}
    const char* kind() const noexcept override { return "capacity_exceeded"; }
    std::uint64_t requested() const noexcept { return requested_; }
    std::uint64_t bound() const noexcept { return bound_; }

   private:
    std::uint64_t requested_;
    std::uint64_t bound_;
};

/// Matrix inversion / solving hit a rank-deficient matrix. Carries the rank.
class SingularError : public DomainError {
   public:
    SingularError(const std::string& what, std::size_t rank) : DomainError(what), rank_(rank) {}
    const char* kind() const noexcept override { return "singular"; }
    std::size_t rank() const noexcept { return rank_; }

   private:
    std::size_t rank_;
};

/// Operands live in different fields.
class FieldMismatchError : public DomainError {
   public:
    explicit FieldMismatchError(const std::string& what) : DomainError(what) {}
    const char* kind() const noexcept override { return "field_mismatch"; }
};

/// Operands live over different algebras.
class AlgebraMismatchError : public DomainError {
   public:
    explicit AlgebraMismatchError(const std::string& what) : DomainError(what) {}
    const char* kind() const noexcept override { return "algebra_mismatch"; }
};

/// A matrix expected to be invertible is not.
class NotInvertibleError : public DomainError {
   public:
    explicit NotInvertibleError(const std::string& what) : DomainError(what) {}
    const char* kind() const noexcept override { return "not_invertible"; }
};

/// A module failed the equivariance checks required for descent.
class NotEquivariantError : public DomainError {
   public:
    NotEquivariantError(const std::string& what, std::string relation)
        : DomainError(what), relation_(std::move(relation)) {}
    const char* kind() const noexcept override { return "not_equivariant"; }
    const std::string& relation() const noexcept { return relation_; }

   private:
    std::string relation_;
};

/// The symbolic determinant identity failed. Raising this indicates an
/// arithmetic bug, never a property of the inputs.
class IdentityViolatedError : public DomainError {
   public:
    explicit IdentityViolatedError(const std::string& what) : DomainError(what) {}
    const char* kind() const noexcept override { return "identity_violated"; }
};

}  // namespace fqdescent
