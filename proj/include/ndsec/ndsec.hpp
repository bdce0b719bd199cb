#pragma once
#ifndef NDSEC_NDSEC_HPP
#define NDSEC_NDSEC_HPP

#include "ndsec/address.hpp"
#include "ndsec/adversary.hpp"
#include "ndsec/dh_keyex.hpp"
#include "ndsec/error.hpp"
#include "ndsec/experiment.hpp"
#include "ndsec/hashed_target.hpp"
#include "ndsec/ndp_codec.hpp"
#include "ndsec/netsim.hpp"
#include "ndsec/node_engine.hpp"
#include "ndsec/report.hpp"
#include "ndsec/sha256.hpp"

#endif  // NDSEC_NDSEC_HPP
