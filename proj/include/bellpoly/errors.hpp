#pragma once

#include <stdexcept>
#include <string>

namespace bellpoly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// An argument violated an operation's precondition.
class InputError : public Error
{
public:
	using Error::Error;
};

/// A sweep or CLI configuration field is invalid. The message names the field.
class ConfigError : public InputError
{
public:
	ConfigError(const std::string& field, const std::string& what)
		: InputError("config field '" + field + "': " + what), field_(field)
	{
	}

	[[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
	std::string field_;
};

/// The requested system is larger than the dense representation supports.
class CapacityError : public Error
{
public:
	using Error::Error;
};

/// A quantity that must be real, Hermitian or bounded came out otherwise.
class NumericalError : public Error
{
public:
	using Error::Error;
};

class IoError : public Error
{
public:
	using Error::Error;
};

} // namespace bellpoly
