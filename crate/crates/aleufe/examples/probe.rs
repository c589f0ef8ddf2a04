fn main() {
    use aleufe::curve::*;
    use aleufe::geo::Point2;
    let n = 128usize;
    let center = Point2::new(0.5, 0.5);
    let r = 0.25;
    let pts: Vec<Point2> = (0..n).map(|i| {
        let a = 2.0*std::f64::consts::PI*i as f64/n as f64;
        center + Point2::new(a.cos(), a.sin())*r
    }).collect();
    let c = fit_closed_spline(&MarkerSet::new(pts, 0.01)).unwrap();
    let x = Point2::new(1.2, 0.9);
    let cp = c.closest_point(x);
    let expected = center + (x - center)*(r/(x-center).norm());
    println!("cp = {:?}\nexpected = {:?}\ndist err = {}", cp, expected, cp.point.dist(expected));
}
