#ifndef TULLOCK_TULLOCK_HPP
#define TULLOCK_TULLOCK_HPP

#include <tullock/bounds.hpp>
#include <tullock/closed_form.hpp>
#include <tullock/equilibrium.hpp>
#include <tullock/errors.hpp>
#include <tullock/harness.hpp>
#include <tullock/instance.hpp>
#include <tullock/iterative.hpp>
#include <tullock/optimum.hpp>
#include <tullock/utility.hpp>

#endif // TULLOCK_TULLOCK_HPP
