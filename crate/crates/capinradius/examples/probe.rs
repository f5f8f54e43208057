use capinradius::exponents::Exponents;
use capinradius::grid2d::{grid_capacity_2d, grid_rayleigh_2d, Grid2D};
use std::f64::consts::PI;
use std::time::Instant;

fn disk_box_grid(box_r: f64, n: usize) -> Grid2D {
    let mut g = Grid2D::cover((-box_r, -box_r, box_r, box_r), n);
    g.pin_outside(|x, y| x * x + y * y < box_r * box_r);
    g
}

fn main() {
    let e3 = Exponents::new(2, 3.0).unwrap();
    let pt = capinradius::capacity::cap_point(&e3, 1.0).unwrap().value();
    for n in [64usize, 128, 256, 512] {
        let mut g = disk_box_grid(1.0, n);
        let h = g.h;
        g.set_obstacle(move |x, y| x.abs() < h * 0.6 && y.abs() < h * 0.6);
        let t = Instant::now();
        let cap = grid_capacity_2d(&e3, &g, 1e-8).unwrap();
        let matched = capinradius::capacity::cap_ball_checked(&e3, h / 2.0, 1.0).unwrap().value;
        println!("cell n={n} (nobst={}): cap={:.6} matched={matched:.6} rel={:+.3}% point={pt:.6} dt={:?}",
            g.obstacle_count(), cap.value(), (cap.value()/matched-1.0)*100.0, t.elapsed());
    }
    let e2 = Exponents::new(2, 2.0).unwrap();
    let mut g = Grid2D::cover((0.0, 0.0, 1.0, 1.0), 256);
    g.pin_outside(|x, y| x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0);
    let t = Instant::now();
    let (lam, _) = grid_rayleigh_2d(&e2, 2.0, &g, 1e-9).unwrap();
    println!("square n=256: lam={lam:.6} rel={:+.4}% dt={:?}", (lam/(2.0*PI*PI)-1.0)*100.0, t.elapsed());
}
