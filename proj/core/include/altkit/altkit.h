#pragma once

#include "altkit/alternant.h"
#include "altkit/compatibility.h"
#include "altkit/errors.h"
#include "altkit/harness.h"
#include "altkit/rational.h"
#include "altkit/rootcount.h"
#include "altkit/symexpr.h"
#include "altkit/systems.h"
