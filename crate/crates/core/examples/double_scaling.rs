//! Critical point of the melonic series and the double-scaling resummation.
use melonforge::asymptotics::{double_scaling, melonic_value, shifted_critical, singular_data};
use melonforge::series::{fraction, melonic_series};
use num::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sd = singular_data(3);
    println!("z0 = {}, T(z0) = {}, U(z0) = {}", fraction(&sd.z0), fraction(&sd.t0), fraction(&sd.u0));
    let z0 = sd.z0.to_f64().unwrap();
    let t60 = melonic_series(3, 60);
    for eps in [1e-1, 1e-2, 1e-3] {
        let z = z0 * (1.0 - eps);
        println!("ε = {eps}: order-60 T = {:.6}, adaptive T = {:.6}", t60.eval_f64(z), melonic_value(3, z, 1e-12)?);
    }
    for n in [10.0, 1e3, 1e6] {
        let ds = double_scaling(3, n, z0 / 2.0)?;
        println!("N = {n}: value {:.10} vs T {:.10}, z1 = {:.8}", ds.value, ds.t, ds.z1);
    }
    println!("z1(N = 100) = {}", fraction(&shifted_critical(3, 100)));
    Ok(())
}
