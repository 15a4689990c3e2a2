#pragma once

#include "bnck/scalar.hpp"
#include "bnck/linalg.hpp"
#include "bnck/report.hpp"
#include "bnck/liealg.hpp"
#include "bnck/forms.hpp"
#include "bnck/courant.hpp"
#include "bnck/structures.hpp"
#include "bnck/integrability.hpp"
#include "bnck/classify.hpp"
#include "bnck/search.hpp"
#include "bnck/io.hpp"
