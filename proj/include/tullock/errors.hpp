#ifndef TULLOCK_ERRORS_HPP
#define TULLOCK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tullock {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error
{
public:
	using std::domain_error::domain_error;
};

/// Caller asked for something the operation does not support.
class usage_error : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// Shapes of the inputs do not agree (e.g. profile length vs. agent count).
class structural_error : public std::length_error
{
public:
	using std::length_error::length_error;
};

/// A construction was requested outside the willingness-factor range where it applies.
class regime_error : public std::domain_error
{
public:
	regime_error(std::string const& what, std::string required_branch)
	: std::domain_error(what),
	  required_branch_(std::move(required_branch))
	{
	}

	std::string const& required_branch() const noexcept { return required_branch_; }

private:
	std::string required_branch_;
};

} // namespace tullock

#endif // TULLOCK_ERRORS_HPP
