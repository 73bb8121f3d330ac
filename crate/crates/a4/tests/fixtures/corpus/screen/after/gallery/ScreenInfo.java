package gallery;

import android.graphics.Point;
import android.view.Display;
import android.view.WindowManager;

public class ScreenInfo {
    private WindowManager windows;

    public int columns() {
        Display display = windows.getDefaultDisplay();
        Point size = new Point();
        display.getSize(size);
        int width = size.x;
        return width / 320;
    }
}
