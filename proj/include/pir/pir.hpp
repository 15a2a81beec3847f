#ifndef PIR_PIR_HPP
#define PIR_PIR_HPP

#include "pir/errors.hpp"
#include "pir/distributions.hpp"
#include "pir/rng.hpp"
#include "pir/linreg.hpp"
#include "pir/intervals.hpp"
#include "pir/reduction.hpp"
#include "pir/simulation.hpp"
#include "pir/dataio.hpp"
#include "pir/svg.hpp"

#endif  // PIR_PIR_HPP
