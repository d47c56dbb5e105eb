#pragma once

#include "certroots/aberth.hpp"
#include "certroots/basins.hpp"
#include "certroots/certify_alpha.hpp"
#include "certroots/certify_global.hpp"
#include "certroots/companion.hpp"
#include "certroots/experiments.hpp"
#include "certroots/io.hpp"
#include "certroots/pipeline.hpp"
#include "certroots/polish.hpp"
#include "certroots/polynomial.hpp"
