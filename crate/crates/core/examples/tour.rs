use unigeo_core::grassmann::{principal_angles, projection_from_basis};
use unigeo_core::lagrangian::{GaugeFunction, Lagrangian};
use unigeo_core::unitary_paths::{distance_phi, geodesic_between};
use unigeo_core::verify::sampling::{sample_haar_unitary, substream};

fn main() -> unigeo_core::Result<()> {
    // Two reproducible Haar-random unitaries.
    let mut rng = substream(42, 0, 0);
    let u = sample_haar_unitary(4, &mut rng)?;
    let v = sample_haar_unitary(4, &mut rng)?;

    // Frobenius geodesic distance, and the same number recovered as the
    // action of the connecting geodesic under the induced-norm Lagrangian.
    let phi = GaugeFunction::schatten(2.0)?;
    let d = distance_phi(&phi, &u, &v)?;
    let geo = geodesic_between(&u, &v, 1.0)?;
    let len = geo.action(&Lagrangian::norm(phi))?;
    assert!((d - len).abs() < 1e-12);
    println!("d(U, V) = {d}");

    // Principal angles between the spans of the first two columns.
    let p = projection_from_basis(&u.as_matrix().columns(0, 2).into_owned())?;
    let q = projection_from_basis(&v.as_matrix().columns(0, 2).into_owned())?;
    println!("angles  = {:?}", principal_angles(&p, &q)?.angles());
    Ok(())
}
