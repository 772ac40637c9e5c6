//! Serde adapter writing a matrix as an array of row arrays.

use ndarray::Array2;
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<T, S>(m: &Array2<T>, s: S) -> Result<S::Ok, S::Error>
where
    T: Serialize,
    S: Serializer,
{
    let rows: Vec<Vec<&T>> = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().collect())
        .collect();
    rows.serialize(s)
}

pub fn deserialize<'de, T, D>(d: D) -> Result<Array2<T>, D::Error>
where
    T: Deserialize<'de> + Clone,
    D: Deserializer<'de>,
{
    let rows: Vec<Vec<T>> = Vec::deserialize(d)?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(D::Error::custom("ragged matrix rows"));
    }
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((nrows, ncols), flat).map_err(D::Error::custom)
}
