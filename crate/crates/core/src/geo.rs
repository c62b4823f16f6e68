//! Spherical-earth geometry.

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// A latitude/longitude pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint<T> {
    pub lat: T,
    pub lon: T,
}

impl<T: Float> GeoPoint<T> {
    pub fn new(lat: T, lon: T) -> Result<Self> {
        let p = GeoPoint { lat, lon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let lat_max = T::from(90.0).unwrap();
        let lon_max = T::from(180.0).unwrap();
        if !(self.lat.abs() <= lat_max) || !(self.lon.abs() <= lon_max) {
            return Err(Error::input(format!(
                "coordinate out of range: ({:?}, {:?})",
                self.lat.to_f64(),
                self.lon.to_f64()
            )));
        }
        Ok(())
    }

    /// Great-circle distance in km (haversine).
    pub fn distance_km(&self, other: &GeoPoint<T>) -> T {
        haversine_km(*self, *other)
    }
}

pub fn haversine_km<T: Float>(a: GeoPoint<T>, b: GeoPoint<T>) -> T {
    let two = T::from(2.0).unwrap();
    let r = T::from(EARTH_RADIUS_KM).unwrap();
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = (b.lat - a.lat).to_radians();
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / two).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / two).sin().powi(2);
    two * r * h.sqrt().min(T::one()).asin()
}

/// Weighted mean of points, adequate for the few-km spans of a park.
pub fn weighted_centroid<T: Float>(points: &[(GeoPoint<T>, T)]) -> Option<GeoPoint<T>> {
    let total = points.iter().fold(T::zero(), |acc, &(_, w)| acc + w);
    if points.is_empty() {
        return None;
    }
    if !(total > T::zero()) {
        let n = T::from(points.len()).unwrap();
        let lat = points.iter().fold(T::zero(), |acc, (p, _)| acc + p.lat) / n;
        let lon = points.iter().fold(T::zero(), |acc, (p, _)| acc + p.lon) / n;
        return Some(GeoPoint { lat, lon });
    }
    let lat = points.iter().fold(T::zero(), |acc, &(p, w)| acc + p.lat * w) / total;
    let lon = points.iter().fold(T::zero(), |acc, &(p, w)| acc + p.lon * w) / total;
    Some(GeoPoint { lat, lon })
}

/// Latitude offset in degrees that corresponds to `km` along a meridian.
pub fn km_to_lat_deg(km: f64) -> f64 {
    (km / EARTH_RADIUS_KM).to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meridian_distance() {
        let a = GeoPoint { lat: 0.0, lon: 0.0 };
        let b = GeoPoint { lat: km_to_lat_deg(100.0), lon: 0.0 };
        assert!((a.distance_km(&b) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn known_city_pair() {
        // Muscat -> Salalah, roughly 860 km
        let muscat = GeoPoint::new(23.588, 58.3829).unwrap();
        let salalah = GeoPoint::new(17.0194, 54.0897).unwrap();
        let d = muscat.distance_km(&salalah);
        assert!((d - 855.0).abs() < 15.0, "{d}");
    }

    #[test]
    fn symmetric_and_generic() {
        let a = GeoPoint { lat: 10.0f32, lon: 20.0 };
        let b = GeoPoint { lat: -5.0f32, lon: 33.0 };
        assert!((haversine_km(a, b) - haversine_km(b, a)).abs() < 1e-3);
    }

    #[test]
    fn rejects_invalid_coordinates() {
        assert!(GeoPoint::new(91.0, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -180.5).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }
}
