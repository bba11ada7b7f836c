//! Coordinates, great-circle distance and radius filtering.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Mean earth radius used for every distance in the service.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Search radius applied when a caller does not give one.
pub const DEFAULT_RADIUS_KM: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeoError {
    NonFinite,
    LatitudeOutOfRange(f64),
    LongitudeOutOfRange(f64),
    InvalidRadius(f64),
}

impl fmt::Display for GeoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoError::NonFinite => f.write_str("coordinates must be finite numbers"),
            GeoError::LatitudeOutOfRange(v) => write!(f, "latitude {v} outside [-90, 90]"),
            GeoError::LongitudeOutOfRange(v) => write!(f, "longitude {v} outside [-180, 180]"),
            GeoError::InvalidRadius(v) => write!(f, "radius must be a positive number of km, got {v}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeoError {}

/// A validated latitude/longitude pair in decimal degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawPoint", into = "RawPoint"))]
pub struct GeoPoint {
    lat_deg: f64,
    lon_deg: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawPoint {
    lat: f64,
    lon: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawPoint> for GeoPoint {
    type Error = GeoError;

    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        GeoPoint::new(raw.lat, raw.lon)
    }
}

#[cfg(feature = "serde")]
impl From<GeoPoint> for RawPoint {
    fn from(p: GeoPoint) -> Self {
        RawPoint { lat: p.lat_deg, lon: p.lon_deg }
    }
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self, GeoError> {
        if !lat_deg.is_finite() || !lon_deg.is_finite() {
            return Err(GeoError::NonFinite);
        }
        if !(-90.0..=90.0).contains(&lat_deg) {
            return Err(GeoError::LatitudeOutOfRange(lat_deg));
        }
        if !(-180.0..=180.0).contains(&lon_deg) {
            return Err(GeoError::LongitudeOutOfRange(lon_deg));
        }
        Ok(GeoPoint { lat_deg, lon_deg })
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat_deg
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon_deg
    }
}

/// Haversine distance in kilometres on a sphere of radius [`EARTH_RADIUS_KM`].
///
/// Coordinate differences enter only through `|Δ|` and the latitude cosines
/// through a commutative product, so the result is bit-for-bit symmetric.
pub fn distance_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat_a = a.lat_deg.to_radians();
    let lat_b = b.lat_deg.to_radians();
    let half_dlat = (a.lat_deg - b.lat_deg).abs().to_radians() / 2.0;
    let half_dlon = (a.lon_deg - b.lon_deg).abs().to_radians() / 2.0;

    let sin_lat = libm::sin(half_dlat);
    let sin_lon = libm::sin(half_dlon);
    let h = sin_lat * sin_lat + libm::cos(lat_a) * libm::cos(lat_b) * (sin_lon * sin_lon);
    let central = 2.0 * libm::asin(libm::sqrt(h.clamp(0.0, 1.0)));
    EARTH_RADIUS_KM * central
}

/// Shops whose distance from `origin` is at most `radius_km` (inclusive),
/// nearest first with ties broken by ascending shop key.
///
/// `radius_km` of `None` means [`DEFAULT_RADIUS_KM`].
pub fn shops_within<K, I>(origin: GeoPoint, radius_km: Option<f64>, shops: I) -> Result<Vec<(K, f64)>, GeoError>
where
    K: Ord,
    I: IntoIterator<Item = (K, GeoPoint)>,
{
    let radius = radius_km.unwrap_or(DEFAULT_RADIUS_KM);
    if !radius.is_finite() || radius <= 0.0 {
        return Err(GeoError::InvalidRadius(radius));
    }
    let mut hits: Vec<(K, f64)> =
        shops.into_iter().map(|(key, at)| (key, distance_km(origin, at))).filter(|(_, d)| *d <= radius).collect();
    hits.sort_by(|(ka, da), (kb, db)| match da.total_cmp(db) {
        Ordering::Equal => ka.cmp(kb),
        other => other,
    });
    Ok(hits)
}
