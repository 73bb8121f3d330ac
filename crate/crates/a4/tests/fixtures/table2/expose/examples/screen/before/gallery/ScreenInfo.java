package gallery;

import android.view.Display;
import android.view.WindowManager;

public class ScreenInfo {
    private WindowManager windows;

    public int columns() {
        Display display = windows.getDefaultDisplay();
        int width = display.getWidth();
        return width / 320;
    }
}
