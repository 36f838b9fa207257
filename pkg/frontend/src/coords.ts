// Canvas <-> server screen-space mapping.
//
// The drawing canvas may be displayed at any CSS size; every pointer event
// is converted into the gateway's fixed screen space (zone.w x zone.h,
// default 640x480) before it goes on the wire, and every snapshot point is
// converted back for display.  The round trip must stay within one pixel
// regardless of the display size.

export interface DisplayRect {
  width: number;
  height: number;
}

export interface ServerZone {
  w: number;
  h: number;
}

export const DEFAULT_ZONE: ServerZone = { w: 640, h: 480 };

export function displayToServer(
  px: number,
  py: number,
  rect: DisplayRect,
  zone: ServerZone = DEFAULT_ZONE,
): { x: number; y: number } {
  return {
    x: (px / rect.width) * zone.w,
    y: (py / rect.height) * zone.h,
  };
}

export function serverToDisplay(
  sx: number,
  sy: number,
  rect: DisplayRect,
  zone: ServerZone = DEFAULT_ZONE,
): { x: number; y: number } {
  return {
    x: (sx / zone.w) * rect.width,
    y: (sy / zone.h) * rect.height,
  };
}

/** World-plane meters -> display pixels, for drone markers. */
export function worldToDisplay(
  wx: number,
  wz: number,
  rect: DisplayRect,
  world: { x: [number, number]; z: [number, number] } = { x: [-1.5, 1.5], z: [0.5, 2.5] },
): { x: number; y: number } {
  const u = (wx - world.x[0]) / (world.x[1] - world.x[0]);
  const v = (world.z[1] - wz) / (world.z[1] - world.z[0]); // top of screen = max altitude
  return { x: u * rect.width, y: v * rect.height };
}
