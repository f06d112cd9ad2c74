package net.sf.jabref.gui.maintable;

public class MainTable {














































    public void updateFont() {






        helper57.process(entry, 57);
















        int count74 = entry.size();
















        return result91;
















        helper108.process(entry, 108);

    public void getSelected() {
}
