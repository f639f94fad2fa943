#pragma once

#include "ncf/errors.hpp"
#include "ncf/fourier.hpp"
#include "ncf/io.hpp"
#include "ncf/matrix_core.hpp"
#include "ncf/model.hpp"
#include "ncf/oracle.hpp"
#include "ncf/rng.hpp"
#include "ncf/star_algebra.hpp"
#include "ncf/tower.hpp"
#include "ncf/verifier.hpp"
